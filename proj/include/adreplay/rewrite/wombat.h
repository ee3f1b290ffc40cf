#ifndef ADREPLAY_REWRITE_WOMBAT_H_
#define ADREPLAY_REWRITE_WOMBAT_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace adreplay::rewrite {

// Epoch seconds of a 14-digit UTC timestamp as base-10 text. Throws
// RewriteError(kInvalidTimestamp).
std::string ComputeWombatSec(std::string_view timestamp14);

inline constexpr std::uint32_t kLcgMultiplier = 9301;
inline constexpr std::uint32_t kLcgIncrement = 49297;
inline constexpr std::uint32_t kLcgModulus = 233280;

// The replay shim's page-level random generator:
//   state <- (9301 * state + 49297) mod 233280, draw = state / 233280
// seeded with seed mod 233280.
class SeededRandom {
 public:
  explicit SeededRandom(std::uint64_t seed)
      : state_(static_cast<std::uint32_t>(seed % kLcgModulus)) {}

  std::uint32_t state() const { return state_; }

  // Advances and returns the new state; the draw is state / 233280.
  std::uint32_t NextState() {
    state_ = (kLcgMultiplier * state_ + kLcgIncrement) % kLcgModulus;
    return state_;
  }
  double Next() { return static_cast<double>(NextState()) / kLcgModulus; }

  // floor(2^32 * draw), computed exactly.
  std::uint32_t NextUint32() {
    return static_cast<std::uint32_t>((std::uint64_t{NextState()} << 32) / kLcgModulus);
  }

  // Random-fill of typed arrays. Each element consumes one draw, truncated
  // to the element width; 64-bit elements take two (high word first).
  void Fill(std::span<std::uint8_t> out);
  void Fill(std::span<std::uint16_t> out);
  void Fill(std::span<std::uint32_t> out);
  void Fill(std::span<std::uint64_t> out);

 private:
  std::uint32_t state_;
};

// First n draws rendered as exact fractions rounded to 12 decimals
// ("0.429359567901").
std::vector<std::string> GoldenVectors(std::uint64_t seed, size_t n);

// One value per line, newline-terminated.
std::string FormatGoldenVectors(std::uint64_t seed, size_t n);

}  // namespace adreplay::rewrite

#endif  // ADREPLAY_REWRITE_WOMBAT_H_
