#include "adreplay/adscan/gallery.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "adreplay/cdx/canonical_url.h"
#include "adreplay/cdx/capture_index.h"
#include "adreplay/rewrite/urim.h"
#include "adreplay/warc/warc_reader.h"
#include "json.hpp"

namespace adreplay::adscan {

namespace {

using nlohmann::ordered_json;

std::string HtmlEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

void WriteFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw warc::WarcError(warc::WarcError::Kind::kIoFailure, "cannot write " + path.string());
  }
}

std::string ItemMarkup(const GalleryItem& item) {
  const std::string src = HtmlEscape(item.urim);
  switch (item.resource.ad_type) {
    case AdType::kImage:
      return "<img src=\"" + src + "\" alt=\"\">";
    case AdType::kVideo:
      return "<video src=\"" + src + "\" controls></video>";
    default:
      return "<iframe src=\"" + src + "\" width=\"640\" height=\"480\"></iframe>";
  }
}

std::string ItemPage(const GalleryItem& item) {
  const cdx::CdxEntry& e = item.resource.entry;
  std::string html = "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>" +
                     HtmlEscape(e.original_uri) + "</title></head>\n<body>\n";
  html += "<p><a href=\"../index.html\">index</a></p>\n";
  html += "<dl>\n<dt>URI-R</dt><dd>" + HtmlEscape(e.original_uri) + "</dd>\n";
  html += "<dt>captured</dt><dd>" + e.timestamp.text() + "</dd>\n";
  html += "<dt>service</dt><dd>" + std::string(ServiceName(item.resource.service)) + "</dd>\n";
  html += "<dt>type</dt><dd>" + std::string(AdTypeName(item.resource.ad_type)) + "</dd>\n";
  html += "<dt>memento</dt><dd><a href=\"" + HtmlEscape(item.urim) + "\">" +
          HtmlEscape(item.urim) + "</a></dd>\n</dl>\n";
  html += ItemMarkup(item) + "\n</body></html>\n";
  return html;
}

std::string IndexPage(const Gallery& gallery) {
  std::string html = "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>Archived ads"
                     "</title></head>\n<body>\n<h1>Archived ads</h1>\n<p>Seed page: " +
                     HtmlEscape(gallery.seed_url) + "</p>\n";
  for (AdType type : kAllAdTypes) {
    std::string rows;
    for (const GalleryItem& item : gallery.items) {
      if (item.resource.ad_type != type) continue;
      rows += "<li><a href=\"" + HtmlEscape(item.page) + "\">" +
              HtmlEscape(item.resource.entry.original_uri) + "</a> " +
              item.resource.entry.timestamp.text() + "</li>\n";
    }
    if (rows.empty()) continue;
    html += "<h2>" + std::string(AdTypeName(type)) + "</h2>\n<ul>\n" + rows + "</ul>\n";
  }
  return html + "</body></html>\n";
}

}  // namespace

Gallery BuildGallery(std::span<const warc::ArchiveSource> sources, std::string_view seed_url,
                     std::string_view replay_base) {
  Gallery gallery;
  gallery.seed_url = std::string(seed_url);
  gallery.seed_key = cdx::Canonicalize(seed_url).key();
  gallery.replay_base = std::string(replay_base);

  cdx::BuildResult built = cdx::BuildIndex(sources);
  if (!built.failures.empty()) {
    throw warc::WarcError(warc::WarcError::Kind::kIoFailure,
                          built.failures.front().source_id + ": " + built.failures.front().error);
  }
  std::map<std::string, const warc::ArchiveSource*, std::less<>> by_id;
  for (const warc::ArchiveSource& s : sources) by_id.emplace(s.id, &s);

  for (const cdx::CdxEntry& e : built.index.entries()) {
    if (e.key == gallery.seed_key || e.status < 200 || e.status >= 300) continue;
    const AdType type = AdTypeForMime(e.mime);
    if (type == AdType::kOther) continue;
    std::optional<ImageSize> size;
    if (type == AdType::kImage) {
      const auto source = by_id.find(e.source_id);
      if (source != by_id.end()) {
        size = ProbeImageSize(warc::ReadRecordAt(*source->second, {e.offset, e.length})
                                  .payload.view());
      }
    }
    AdResource resource = ClassifyResource(e, size);
    if (!resource.visible) continue;
    GalleryItem item;
    item.urim = rewrite::MakeUriM(replay_base, e.original_uri, e.timestamp.text(),
                                  rewrite::Modifier::kId);
    item.resource = std::move(resource);
    gallery.items.push_back(std::move(item));
  }
  std::stable_sort(gallery.items.begin(), gallery.items.end(),
                   [](const GalleryItem& a, const GalleryItem& b) {
                     return a.resource.ad_type < b.resource.ad_type;
                   });
  for (size_t i = 0; i < gallery.items.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "items/%04zu.html", i + 1);
    gallery.items[i].page = name;
  }
  return gallery;
}

std::string GalleryManifestJson(const Gallery& gallery) {
  ordered_json groups = ordered_json::object();
  for (AdType type : kAllAdTypes) {
    if (type == AdType::kOther) continue;
    groups[std::string(AdTypeName(type))] = ordered_json::array();
  }
  for (const GalleryItem& item : gallery.items) {
    const cdx::CdxEntry& e = item.resource.entry;
    groups[std::string(AdTypeName(item.resource.ad_type))].push_back({
        {"urir", e.original_uri},
        {"key", e.key},
        {"timestamp14", e.timestamp.text()},
        {"mime", e.mime},
        {"status", e.status},
        {"service", ServiceName(item.resource.service)},
        {"ad_type", AdTypeName(item.resource.ad_type)},
        {"urim", item.urim},
        {"page", item.page},
    });
  }
  const ordered_json doc = {
      {"seed_url", gallery.seed_url},
      {"seed_key", gallery.seed_key},
      {"replay_base", gallery.replay_base},
      {"count", gallery.items.size()},
      {"groups", groups},
  };
  return doc.dump(2) + "\n";
}

void WriteGallery(const Gallery& gallery, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "items", ec);
  if (ec) {
    throw warc::WarcError(warc::WarcError::Kind::kIoFailure,
                          "cannot create " + out_dir.string() + ": " + ec.message());
  }
  WriteFile(out_dir / "manifest.json", GalleryManifestJson(gallery));
  WriteFile(out_dir / "index.html", IndexPage(gallery));
  for (const GalleryItem& item : gallery.items) WriteFile(out_dir / item.page, ItemPage(item));
}

Gallery EmitGallery(const std::filesystem::path& warc_path, std::string_view seed_url,
                    const std::filesystem::path& out_dir, std::string_view replay_base) {
  const warc::ArchiveSource source = warc::OpenWarcFile(warc_path);
  Gallery gallery = BuildGallery(std::span(&source, 1), seed_url, replay_base);
  WriteGallery(gallery, out_dir);
  return gallery;
}

}  // namespace adreplay::adscan
