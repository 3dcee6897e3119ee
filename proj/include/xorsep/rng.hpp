#pragma once

#include <cstdint>
#include <string_view>

#include "xorsep/types.hpp"

namespace xorsep {

// Counter-based Gaussian stream. A draw is a pure function of
// (seed, label, index): same triple, same bits, on any run of the same build.
// Draws at different indices are independent hash evaluations, so a stream can
// be consumed out of order or in parallel without state.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::string_view label);

  // Uniform on (0, 1], 53-bit resolution.
  double uniform(std::uint64_t index) const;

  // Standard normal via Box-Muller; draw i consumes uniforms 2i and 2i+1.
  double normal(std::uint64_t index) const;

  // normals(count, offset)[i] == normal(offset + i).
  RVector normals(Index count, std::uint64_t offset = 0) const;

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

// Stable 64-bit label hash (FNV-1a), exposed for manifest round-trips.
std::uint64_t hash_label(std::string_view label);

}  // namespace xorsep
