#include "adreplay/rewrite/wombat.h"

#include <cstdio>

#include "adreplay/rewrite/urim.h"
#include "adreplay/util/timestamp.h"

namespace adreplay::rewrite {

namespace {

template <typename T>
void FillTruncated(SeededRandom& rng, std::span<T> out) {
  for (T& v : out) v = static_cast<T>(rng.NextUint32());
}

std::string FormatDraw(std::uint32_t state) {
  // Round half up; an exact half cannot occur since 233280 has the factor 3^6.
  constexpr std::uint64_t kScale = 1'000'000'000'000;
  const std::uint64_t n = (2 * std::uint64_t{state} * kScale + kLcgModulus) / (2 * kLcgModulus);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%llu.%012llu", static_cast<unsigned long long>(n / kScale),
                static_cast<unsigned long long>(n % kScale));
  return buf;
}

}  // namespace

std::string ComputeWombatSec(std::string_view timestamp14) {
  const auto ts = Timestamp14::Parse(timestamp14);
  if (!ts) {
    throw RewriteError(RewriteError::Kind::kInvalidTimestamp,
                       "invalid timestamp '" + std::string(timestamp14) + "'");
  }
  return std::to_string(ts->epoch_seconds());
}

void SeededRandom::Fill(std::span<std::uint8_t> out) { FillTruncated(*this, out); }
void SeededRandom::Fill(std::span<std::uint16_t> out) { FillTruncated(*this, out); }
void SeededRandom::Fill(std::span<std::uint32_t> out) { FillTruncated(*this, out); }

void SeededRandom::Fill(std::span<std::uint64_t> out) {
  for (std::uint64_t& v : out) {
    const std::uint64_t high = NextUint32();
    v = (high << 32) | NextUint32();
  }
}

std::vector<std::string> GoldenVectors(std::uint64_t seed, size_t n) {
  SeededRandom rng(seed);
  std::vector<std::string> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(FormatDraw(rng.NextState()));
  return out;
}

std::string FormatGoldenVectors(std::uint64_t seed, size_t n) {
  std::string out;
  for (const std::string& v : GoldenVectors(seed, n)) {
    out += v;
    out += '\n';
  }
  return out;
}

}  // namespace adreplay::rewrite
