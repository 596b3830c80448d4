#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace purikit {

/// splitmix64 finalizer; used to derive well-separated seeds from indices.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// base XOR hash(indices), order-sensitive.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> indices) noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::uint64_t i : indices) h = splitmix64(h ^ splitmix64(i));
  return base ^ h;
}

/// Platform-independent stream: std::mt19937_64 (whose output sequence is
/// fixed by the standard) with in-house conversions to double, since the
/// std distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal, Marsaglia polar method.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace purikit
