#pragma once

#include <cstdint>
#include <random>

#include "studentmc/data.hpp"

namespace studentmc {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Independent sub-seed for a named stream and replicate index, so that
/// replicates and stages (mask, noise, chain, ...) never share a stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
  return splitmix64(splitmix64(master ^ (0x9e3779b97f4a7c15ull * (stream + 1))) ^
                    splitmix64(index + 1));
}

/// Matrix with i.i.d. standard normal entries, filled row by row.
inline Matrix gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      out(i, j) = normal(rng);
    }
  }
  return out;
}

}  // namespace studentmc
