#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace hardycheck {

/// splitmix64 step; used to derive independent substream seeds so that the
/// draws of one trial never shift the draws of the next.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed * 0x9e3779b97f4a7c15ULL + splitmix64(stream + 1));
}

/// Seeded generator with reproducible uniform draws. std::mt19937_64 has a
/// fully specified output sequence; the distributions below avoid
/// std::uniform_real_distribution, whose mapping is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }

  /// Uniform integer in [a, b] inclusive.
  long uniform_int(long a, long b) {
    return a + static_cast<long>(uniform() * static_cast<double>(b - a + 1));
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

/// Deterministic low-discrepancy points in [0,1)^dim (Kronecker sequence on
/// square-root-of-prime frequencies). The seed only shifts the phase, so any
/// seed yields a well-spread start set.
class KroneckerSequence {
 public:
  KroneckerSequence(std::uint64_t seed, std::size_t dim) : dim_(dim) {
    static constexpr std::array<int, 8> primes = {2, 3, 5, 7, 11, 13, 17, 19};
    for (std::size_t j = 0; j < dim; ++j) {
      double frac_sqrt = std::sqrt(static_cast<double>(primes[j % primes.size()]));
      alpha_.push_back(frac_sqrt - std::floor(frac_sqrt));
      double off = static_cast<double>(derive_seed(seed, j) >> 11) * 0x1.0p-53;
      offset_.push_back(off);
    }
  }

  std::vector<double> point(std::size_t k) const {
    std::vector<double> p(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      double v = offset_[j] + static_cast<double>(k + 1) * alpha_[j];
      p[j] = v - std::floor(v);
    }
    return p;
  }

 private:
  std::size_t dim_;
  std::vector<double> alpha_;
  std::vector<double> offset_;
};

}  // namespace hardycheck
