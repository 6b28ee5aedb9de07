#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace mspp {

// splitmix64, used for seed expansion and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from (base, stream). All per-round and
// per-replicate randomness is keyed this way so runs replay exactly.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t s = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  return splitmix64(s);
}

// xoshiro256++ with splitmix64 seeding and Box-Muller normals. Fixed integer
// arithmetic plus libm keeps traces reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the paired value is cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Uniform index in [0, bound). Modulo bias is < bound / 2^64.
  int next_index(int bound) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(bound)); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Fisher-Yates shuffle of {0, ..., count-1}.
inline std::vector<int> random_permutation(int count, Rng& rng) {
  std::vector<int> perm(count);
  for (int i = 0; i < count; ++i) perm[i] = i;
  for (int i = count - 1; i > 0; --i) {
    const int j = rng.next_index(i + 1);
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

}  // namespace mspp
