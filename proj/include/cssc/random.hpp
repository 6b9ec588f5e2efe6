#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Deterministic randomness helpers. std::mt19937_64 output is fully
// specified by the standard, but the standard distributions are not, so
// every draw here goes through our own (stable) transforms. All stochastic
// components derive their streams from a master seed via mix(), which keeps
// runs reproducible regardless of scheduling.

namespace cssc::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed and a stream id.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + (stream << 1));
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b >> 17) ^ stream;
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix(mix(seed, a), b);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

// Uniform integer in [0, n) without std::uniform_int_distribution
// (whose mapping is implementation-defined).
inline std::size_t uniform_index(Engine& eng, std::size_t n) {
  return static_cast<std::size_t>(
      (static_cast<unsigned __int128>(eng()) * n) >> 64);
}

// Uniform double in [0, 1).
inline double uniform_real(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller. Two draws per sample; the spare is
// discarded so the call is stateless.
inline double gaussian(Engine& eng) {
  const double u1 = (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform_real(eng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

template <typename T>
void shuffle(std::vector<T>& v, Engine& eng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = uniform_index(eng, i);
    std::swap(v[i - 1], v[j]);
  }
}

// Indices of a bootstrap resample: `count` draws with replacement from [0, n).
inline std::vector<std::size_t> bootstrap_indices(Engine& eng, std::size_t n,
                                                  std::size_t count) {
  std::vector<std::size_t> out(count);
  for (auto& idx : out) idx = uniform_index(eng, n);
  return out;
}

}  // namespace cssc::rng
