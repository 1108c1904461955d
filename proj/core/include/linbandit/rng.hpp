#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace linbandit {

/// splitmix64 step; used as the seed-mixing primitive for stream derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over the role name, so streams keyed by distinct labels never collide
/// by accident.
inline std::uint64_t hash_role(std::string_view role) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : role) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Child-stream seed for (base_seed, repetition, role). The mixer is pinned:
/// seed = splitmix64(splitmix64(splitmix64(base) ^ rep) ^ fnv1a(role)).
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t repetition,
                                 std::string_view role) {
  std::uint64_t s = splitmix64(base_seed);
  s = splitmix64(s ^ repetition);
  s = splitmix64(s ^ hash_role(role));
  return s;
}

/// Deterministic random stream. The engine is mt19937_64 (output sequence is
/// pinned by the standard) and the floating-point transforms below are our own,
/// so a given seed produces the same draws on any conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Marsaglia polar; one spare draw is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return engine_() % n;  // modulo bias is irrelevant at simulation scales
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace linbandit
