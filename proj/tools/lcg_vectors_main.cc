// Writes the replay shim's seeded random draws as golden vectors, one
// decimal per line.
//
//   lcg-vectors <seed> <count> [--out FILE]

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "adreplay/rewrite/wombat.h"

int main(int argc, char** argv) {
  CLI::App app{"Golden vectors for the seeded page random generator"};
  std::uint64_t seed = 0;
  std::size_t count = 0;
  std::string out;
  app.add_option("seed", seed, "Seed, usually wombat_sec")->required();
  app.add_option("count", count, "Number of draws")->required();
  app.add_option("--out", out, "Write to FILE instead of stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  const std::string text = adreplay::rewrite::FormatGoldenVectors(seed, count);
  if (out.empty()) {
    std::cout << text;
    return std::cout ? 0 : 1;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  file << text;
  if (!file) {
    std::cerr << "lcg-vectors: cannot write " << out << "\n";
    return 1;
  }
  return 0;
}
