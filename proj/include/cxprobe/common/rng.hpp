#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string_view>

namespace cxprobe {

// Seeded random stream. The engine is std::mt19937_64; the distributions are
// implemented here because the standard ones are implementation-defined and
// runs must reproduce bit-for-bit across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  // Uniform real in [0, 1).
  double uniform01();

  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Stage seed derived from the master seed and a (stage name, indices) key.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage,
                          std::initializer_list<std::uint64_t> indices = {});

}  // namespace cxprobe
