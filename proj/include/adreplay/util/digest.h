#ifndef ADREPLAY_UTIL_DIGEST_H_
#define ADREPLAY_UTIL_DIGEST_H_

#include <string>
#include <string_view>

namespace adreplay {

// "sha1:" followed by the RFC 4648 base32 encoding of the SHA-1 digest, the
// form crawlers write into WARC-Payload-Digest.
std::string Sha1Base32Digest(std::string_view bytes);

std::string Base32Encode(std::string_view bytes);

}  // namespace adreplay

#endif  // ADREPLAY_UTIL_DIGEST_H_
