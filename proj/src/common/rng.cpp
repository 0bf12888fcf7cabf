#include "cxprobe/common/rng.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cxprobe/common/text.hpp"

namespace cxprobe {

std::size_t Rng::uniform_index(std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  // Rejection sampling on the largest multiple of n below 2^64.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      (std::numeric_limits<std::uint64_t>::max() % bound + 1) % bound;
  std::uint64_t x = engine_();
  while (x > limit) x = engine_();
  return static_cast<std::size_t>(x % bound);
}

double Rng::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_normal_) {
    double v = *spare_normal_;
    spare_normal_.reset();
    return v;
  }
  double u1 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  return r * std::cos(theta);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view stage,
                          std::initializer_list<std::uint64_t> indices) {
  std::uint64_t h = splitmix64(master ^ text::fnv1a64(stage));
  for (std::uint64_t i : indices) h = splitmix64(h ^ splitmix64(i));
  return h;
}

}  // namespace cxprobe
