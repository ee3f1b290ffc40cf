#ifndef ADREPLAY_CDX_CDXJ_H_
#define ADREPLAY_CDX_CDXJ_H_

#include <iosfwd>
#include <string>

#include "adreplay/cdx/capture_index.h"

namespace adreplay::cdx {

// One line per entry, `key timestamp14 {json}`, lines sorted lexically.
void SaveCdxj(const CaptureIndex& index, std::ostream& out);

// Throws CdxError(kBadCdxj) with the offending line number.
CaptureIndex LoadCdxj(std::istream& in);

std::string FormatCdxjLine(const CdxEntry& entry);

}  // namespace adreplay::cdx

#endif  // ADREPLAY_CDX_CDXJ_H_
