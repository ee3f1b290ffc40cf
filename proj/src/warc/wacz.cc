#include "adreplay/warc/wacz.h"

#include <fstream>
#include <functional>
#include <sstream>

#include "adreplay/util/strings.h"
#include "adreplay/warc/zip.h"

namespace adreplay::warc {

namespace {

constexpr std::string_view kArchiveDir = "archive/";

bool IsWarcMember(std::string_view name) {
  if (!name.starts_with(kArchiveDir)) return false;
  return EndsWithIgnoreCase(name, ".warc") || EndsWithIgnoreCase(name, ".warc.gz");
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WarcError(WarcError::Kind::kIoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::vector<ArchiveSource> OpenWacz(const std::filesystem::path& path) {
  const ZipReader zip = ZipReader::Open(path);
  std::vector<ArchiveSource> sources;
  for (const ZipEntry& entry : zip.entries()) {
    if (!IsWarcMember(entry.name)) continue;
    ArchiveSource source;
    source.id = path.string() + "#" + entry.name;
    if (entry.method == 0) {
      source.locator = path;
      source.base_offset = entry.data_offset;
      source.base_length = entry.compressed_size;
    } else {
      const std::string bytes = zip.Extract(entry);
      const auto name_hash = std::hash<std::string>{}(source.id);
      source.locator = std::filesystem::temp_directory_path() /
                       ("adreplay-wacz-" + std::to_string(name_hash) + ".warc");
      std::ofstream out(source.locator, std::ios::binary | std::ios::trunc);
      out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
      if (!out) throw WarcError(WarcError::Kind::kIoFailure, "cannot extract " + entry.name);
    }
    std::ifstream in(source.locator, std::ios::binary);
    in.seekg(static_cast<std::streamoff>(source.base_offset));
    unsigned char magic[2] = {0, 0};
    in.read(reinterpret_cast<char*>(magic), 2);
    source.kind = (magic[0] == 0x1f && magic[1] == 0x8b) ? SourceKind::kWarcGzip
                                                         : SourceKind::kWarcPlain;
    sources.push_back(std::move(source));
  }
  if (sources.empty()) {
    throw WarcError(WarcError::Kind::kNoArchiveMembers,
                    path.string() + " has no WARC members under " + std::string(kArchiveDir));
  }
  return sources;
}

void WriteWacz(std::span<const std::filesystem::path> warcs, const std::filesystem::path& path) {
  ZipWriter zip(path);
  std::string resources;
  for (const auto& warc : warcs) {
    const std::string name = std::string(kArchiveDir) + warc.filename().string();
    const std::string bytes = ReadFile(warc);
    zip.Add(name, bytes);
    if (!resources.empty()) resources += ",";
    resources += "{\"name\":\"" + warc.filename().string() + "\",\"path\":\"" + name +
                 "\",\"bytes\":" + std::to_string(bytes.size()) + "}";
  }
  zip.Add("datapackage.json",
          "{\"profile\":\"data-package\",\"wacz_version\":\"1.1.1\",\"resources\":[" +
              resources + "]}",
          /*deflate=*/true);
  zip.Finish();
}

}  // namespace adreplay::warc
