#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace decomp {

// Counter-based splittable generator. A stream is keyed by a seed plus a
// path of labels (sample id, block id, ...); streams derived from the same
// (seed, path) are identical no matter which thread draws from them or in
// what order other streams are consumed. The mixer is the splitmix64
// finalizer, applied once per derivation step and once per output word.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(mix(seed ^ 0x5d1f8a2b3c4d5e6fULL)) {}

  SplitRng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) : SplitRng(seed) {
    for (std::uint64_t p : path) descend(p);
  }

  // Derives a child stream keyed by `label`.
  void descend(std::uint64_t label) {
    state_ = mix(state_ ^ mix(label + 0x9e3779b97f4a7c15ULL));
  }

  SplitRng child(std::uint64_t label) const {
    SplitRng r = *this;
    r.descend(label);
    return r;
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform on (0,1): never returns an exact endpoint, so log() is safe.
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; always consumes exactly two words.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double half_normal() { return std::fabs(normal()); }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

  std::uint64_t state_;
};

}  // namespace decomp
