#ifndef FBEH_RNG_HPP
#define FBEH_RNG_HPP

#include <cmath>
#include <cstdint>

namespace fbeh {

// splitmix64 step; used both as a generator seeder and as the stream hash.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256** with explicit seeding; fully specified so that sampler output is
// identical across platforms and thread schedules.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
    has_spare_ = false;
    spare_ = 0.0;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Marsaglia polar; the spare value is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Exponential with the given rate.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
  bool has_spare_;
  double spare_;
};

// Stream derivation: stream = hash(master, trial, label). Serial and parallel
// runs that index trials identically therefore draw identical randomness.
inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t trial_index,
                         std::uint64_t stream_label = 0) {
  std::uint64_t h = master_seed;
  std::uint64_t a = splitmix64(h);
  h ^= (trial_index + 0x9E3779B97F4A7C15ULL) * 0xD1B54A32D192ED03ULL;
  std::uint64_t b = splitmix64(h);
  h ^= (stream_label + 0x2545F4914F6CDD1DULL) * 0x9E6C63D0876A9A62ULL;
  std::uint64_t c = splitmix64(h);
  return Rng(a ^ (b << 1) ^ c);
}

}  // namespace fbeh

#endif
