#pragma once

#include <cmath>
#include <cstdint>

namespace funclass {

// Counter-based pseudo-random generator (SplitMix64 core).  Every work unit
// derives its own stream from (master seed, id...), so draws depend only on
// the ids and never on scheduling or on how many coordinates other units
// consumed.  All distributions are implemented here to keep output
// bit-identical across standard libraries and worker counts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Derives an independent stream from a master seed and up to three ids.
  static Rng stream(std::uint64_t master, std::uint64_t id0,
                    std::uint64_t id1 = 0, std::uint64_t id2 = 0) {
    std::uint64_t s = mix(master + 0x9e3779b97f4a7c15ULL);
    s = mix(s ^ mix(id0 + 0xbf58476d1ce4e5b9ULL));
    s = mix(s ^ mix(id1 + 0x94d049bb133111ebULL));
    s = mix(s ^ mix(id2 + 0xd6e8feb86659fd93ULL));
    return Rng(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform on [0,1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0,1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second deviate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = uniform_pos();
    double v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    double a = 6.283185307179586476925286766559 * v;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Fair coin; 1 with probability 1/2.
  int bernoulli_half() { return static_cast<int>(next_u64() >> 63); }

  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Purpose ids that keep independently consumed streams from colliding.
namespace stream_tag {
inline constexpr std::uint64_t pair = 1;
inline constexpr std::uint64_t train = 2;
inline constexpr std::uint64_t inner = 3;
inline constexpr std::uint64_t split = 4;
inline constexpr std::uint64_t path = 5;
inline constexpr std::uint64_t boundary = 6;
inline constexpr std::uint64_t filler = 7;
inline constexpr std::uint64_t shuffle = 8;
inline constexpr std::uint64_t packing = 9;
inline constexpr std::uint64_t label = 10;
}  // namespace stream_tag

// Collapses a derived stream into a single seed for an API taking one u64.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t id0,
                                 std::uint64_t id1 = 0, std::uint64_t id2 = 0) {
  return Rng::stream(master, id0, id1, id2).next_u64();
}

}  // namespace funclass
