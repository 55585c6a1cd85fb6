#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace setlocal {

// mt19937_64 produces the same sequence on every conforming platform; the
// standard distributions do not, so bounded draws are done here.
using Rng = std::mt19937_64;

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} / bound) * bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

inline bool coin(Rng& rng, std::uint64_t num, std::uint64_t den) { return uniform_below(rng, den) < num; }

template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_below(rng, i)]);
  }
}

}  // namespace setlocal
