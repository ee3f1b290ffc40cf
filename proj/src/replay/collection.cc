#include "adreplay/replay/collection.h"

#include "adreplay/warc/wacz.h"

namespace adreplay::replay {

std::shared_ptr<const Collection> BuildCollection(std::vector<warc::ArchiveSource> sources,
                                                  std::vector<fuzzy::FuzzyRule> rules) {
  auto collection = std::make_shared<Collection>();
  cdx::BuildResult built = cdx::BuildIndex(sources);
  collection->index = std::make_shared<const cdx::CaptureIndex>(std::move(built.index));
  collection->failures = std::move(built.failures);
  for (warc::ArchiveSource& source : sources) {
    std::string id = source.id;
    collection->sources.emplace(std::move(id), std::move(source));
  }
  collection->resolver =
      std::make_shared<const fuzzy::Resolver>(collection->index, std::move(rules));
  return collection;
}

std::vector<warc::ArchiveSource> OpenSources(std::span<const std::filesystem::path> warcs,
                                             std::span<const std::filesystem::path> waczs) {
  std::vector<warc::ArchiveSource> sources;
  for (const auto& path : warcs) sources.push_back(warc::OpenWarcFile(path));
  for (const auto& path : waczs) {
    for (warc::ArchiveSource& s : warc::OpenWacz(path)) sources.push_back(std::move(s));
  }
  return sources;
}

}  // namespace adreplay::replay
