#ifndef ADREPLAY_REPLAY_COLLECTION_H_
#define ADREPLAY_REPLAY_COLLECTION_H_

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "adreplay/cdx/capture_index.h"
#include "adreplay/fuzzy/resolver.h"
#include "adreplay/warc/capture_record.h"

namespace adreplay::replay {

// An immutable snapshot of everything needed to serve: the index, the
// sources it points into and the resolver built over it.
struct Collection {
  std::shared_ptr<const cdx::CaptureIndex> index;
  std::map<std::string, warc::ArchiveSource, std::less<>> sources;  // by id
  std::shared_ptr<const fuzzy::Resolver> resolver;
  std::vector<cdx::SourceFailure> failures;
};

std::shared_ptr<const Collection> BuildCollection(std::vector<warc::ArchiveSource> sources,
                                                  std::vector<fuzzy::FuzzyRule> rules =
                                                      fuzzy::BuiltinRules());

// Opens plain or gzipped WARC files and WACZ containers. Throws WarcError
// when a container cannot be opened at all.
std::vector<warc::ArchiveSource> OpenSources(std::span<const std::filesystem::path> warcs,
                                             std::span<const std::filesystem::path> waczs);

}  // namespace adreplay::replay

#endif  // ADREPLAY_REPLAY_COLLECTION_H_
