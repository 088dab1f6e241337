#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace qcadmm {

// Stable 64-bit mix (splitmix64 finalizer). Used both as the PRNG step and
// as the hash for deriving per-trial seeds, so experiment results do not
// depend on platform hash implementations.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Order-sensitive combine for (master_seed, grid index, trial index, ...).
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;  // arbitrary non-zero start
  for (std::uint64_t p : parts) h = mix64(h ^ (p + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
  return h;
}

// Splittable counter-based stream: the k-th output is a pure function of
// (key, k), so identical seeds replay identical draws and child streams
// derived via split() are independent of the parent's position.
class RngStream {
 public:
  RngStream() : RngStream(0) {}
  explicit RngStream(std::uint64_t seed) : key_(mix64(seed ^ 0x1905ull)), counter_(0) {}

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in {0, 1, ..., n-1}; unbiased by rejection
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = n * ((~0ULL) / n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // standard normal via Box-Muller; consumes two draws per call
  double next_normal() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  double next_normal(double mean, double stddev) { return mean + stddev * next_normal(); }

  // independent child stream; does not advance this stream
  RngStream split(std::uint64_t index) const {
    RngStream child;
    child.key_ = mix64(key_ ^ mix64(index + 0x632be59bd9b4e019ULL));
    child.counter_ = 0;
    return child;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace qcadmm
