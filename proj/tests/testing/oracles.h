#ifndef ADREPLAY_TESTS_TESTING_ORACLES_H_
#define ADREPLAY_TESTS_TESTING_ORACLES_H_

// Reference implementations written separately from the library, used to
// check it on generated inputs.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adreplay/cdx/capture_index.h"
#include "adreplay/util/timestamp.h"

namespace adreplay::testing {

// Canonical key of an absolute http(s) URL, applying the normalization
// steps one after another with std::regex.
std::string ReferenceCanonicalize(const std::string& url);

// Linear scan over a whole index: the capture of `key` nearest to `ts`,
// preferring usable captures and then the earlier one. nullptr on miss.
const cdx::CdxEntry* BruteForceNearest(std::span<const cdx::CdxEntry> all, std::string_view key,
                                       const Timestamp14& ts);

// Days-from-civil arithmetic, no calendar library.
std::int64_t EpochSecondsOracle(int year, int month, int day, int hour, int minute, int second);

// State after k steps of state <- (9301 state + 49297) mod 233280 from
// seed mod 233280, by composing the affine map with itself.
std::uint32_t LcgStateAfter(std::uint64_t seed, std::uint64_t k);

// state/233280 by long division, rounded half up to 12 places.
std::string ExactDrawDecimal(std::uint32_t state);

struct ResolutionCase {
  std::string reference;
  std::string expected;
};

// Reference-resolution examples against base http://a/b/c/d;p?q.
const std::vector<ResolutionCase>& RfcResolutionCases();

}  // namespace adreplay::testing

#endif  // ADREPLAY_TESTS_TESTING_ORACLES_H_
