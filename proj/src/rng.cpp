#include "xorsep/rng.hpp"

#include <cmath>
#include <numbers>

namespace xorsep {
namespace {

// splitmix64 finalizer: bijective 64-bit mix, passes standard statistical
// batteries when driven by a counter.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t hash_label(std::string_view label) {
  std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

GaussianStream::GaussianStream(std::uint64_t seed, std::string_view label)
    : key_(mix(seed ^ mix(hash_label(label)))) {}

double GaussianStream::uniform(std::uint64_t index) const {
  const std::uint64_t bits = mix(key_ + index);
  // (0, 1]: never 0, so log() below is finite.
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double GaussianStream::normal(std::uint64_t index) const {
  const double u1 = uniform(2 * index);
  const double u2 = uniform(2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RVector GaussianStream::normals(Index count, std::uint64_t offset) const {
  RVector out(count);
  for (Index i = 0; i < count; ++i) out[i] = normal(offset + static_cast<std::uint64_t>(i));
  return out;
}

}  // namespace xorsep
