#pragma once

#include <random>
#include <string>
#include <vector>

#include "rankin/spectra.hpp"

namespace rankin::test {

inline constexpr int kCases = 250;  // randomized cases per property

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(0x5eed2024);
  return g;
}
inline int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline TokenRegistry chi() { return TokenRegistry({{"chi", 1, "chi"}}); }
inline TokenRegistry self_dual() { return TokenRegistry({{"a", 1, "a"}, {"b", 1, "b"}, {"c", 1, "c"}}); }
inline TokenRegistry dual_pair() { return TokenRegistry({{"a", 1, "b"}, {"b", 1, "a"}, {"c", 1, "c"}}); }
inline TokenRegistry mixed() { return TokenRegistry({{"chi", 1, "chi"}, {"s", 2, "sv"}, {"sv", 2, "s"}}); }

inline SpehBlock B(const TokenRegistry& reg, const std::string& id, int d) { return SpehBlock::make(reg, id, d); }

inline SpehBlock random_block(const TokenRegistry& reg, int min_d, int max_d) {
  const auto& t = reg.tokens()[uniform(0, static_cast<int>(reg.tokens().size()) - 1)];
  return SpehBlock::make(reg, t.id, uniform(min_d, max_d));
}

inline std::string data_dir() {
#ifdef RANKIN_DATA_DIR
  return RANKIN_DATA_DIR;
#else
  return "data";
#endif
}

}  // namespace rankin::test
