#ifndef ADREPLAY_WARC_WACZ_H_
#define ADREPLAY_WARC_WACZ_H_

#include <filesystem>
#include <span>
#include <vector>

#include "adreplay/warc/capture_record.h"

namespace adreplay::warc {

// One source per WARC member under archive/. Stored members are read in
// place; deflated members are extracted to a temporary file first. Embedded
// indexes are ignored. Throws WarcError(kNotAZip | kNoArchiveMembers).
std::vector<ArchiveSource> OpenWacz(const std::filesystem::path& path);

// Packs WARC files into a WACZ (stored members under archive/, plus a
// minimal datapackage.json).
void WriteWacz(std::span<const std::filesystem::path> warcs, const std::filesystem::path& path);

}  // namespace adreplay::warc

#endif  // ADREPLAY_WARC_WACZ_H_
