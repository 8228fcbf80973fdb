#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lil::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Key for a child stream. Hashing along an ancestry chain gives every node
// of a tree its own stream, independent of evaluation order.
inline std::uint64_t derive(std::uint64_t parent, std::uint64_t child) {
  return mix64(parent ^ (0xD1B54A32D192ED03ull * (child + 1)));
}

// Counter-based stream: word i is a pure function of (key, i).
class Stream {
 public:
  Stream() = default;
  explicit Stream(std::uint64_t key) : key_(key) {}
  Stream(std::uint64_t seed, std::uint64_t id) : key_(derive(mix64(seed), id)) {}

  std::uint64_t key() const { return key_; }

  std::uint64_t word(std::uint64_t counter) const {
    return mix64(key_ + counter * kGolden);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(word(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a Box-Muller log argument.
  double uniform_open(std::uint64_t counter) const {
    return (static_cast<double>(word(counter) >> 11) + 1.0) * 0x1.0p-53;
  }

  double normal(std::uint64_t counter) const {
    const double u = uniform_open(2 * counter);
    const double v = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u)) *
           std::cos(2.0 * std::numbers::pi * v);
  }

  std::uint64_t below(std::uint64_t counter, std::uint64_t n) const {
    // Desk-scale modulo draw; bias is ~n/2^64.
    return word(counter) % n;
  }

  bool bit(std::uint64_t counter) const { return word(counter) & 1ull; }

  Stream child(std::uint64_t id) const { return Stream(derive(key_, id)); }

 private:
  std::uint64_t key_ = 0;
};

}  // namespace lil::rng
