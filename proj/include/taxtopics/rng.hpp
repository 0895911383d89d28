#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace taxtopics {

// Deterministic random stream. The engine state is fully specified by the
// standard, so identical seeds give identical draws on every platform; the
// uniform/normal/gamma mappings below are hand-rolled for the same reason
// (std::uniform_real_distribution et al. are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // uniform draw in [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // uniform draw in (0, 1]
  double uniform_pos() { return 1.0 - uniform(); }

  // unbiased integer in [0, n)
  std::uint64_t uniform_int(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = eng_();
    } while (r >= limit);
    return r % n;
  }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform_pos();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(2.0 * M_PI * u2);
    have_cached_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  // Marsaglia-Tsang; shape < 1 handled by the boost trick G(a) = G(a+1) U^{1/a}
  double gamma(double shape) {
    if (shape < 1.0) {
      double u = uniform_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // log of a Gamma(shape, 1) draw; stays finite for tiny shapes where the
  // plain draw underflows
  double log_gamma_draw(double shape) {
    if (shape >= 0.1) return std::log(gamma(shape));
    double u = uniform_pos();
    return std::log(gamma(shape + 1.0)) + std::log(u) / shape;
  }

  std::vector<double> dirichlet(const std::vector<double>& alpha) {
    const std::size_t k = alpha.size();
    std::vector<double> out(k);
    double amin = alpha[0];
    for (double a : alpha) amin = std::min(amin, a);
    if (amin >= 0.01) {
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        out[i] = gamma(alpha[i]);
        sum += out[i];
      }
      for (double& v : out) v /= sum;
      return out;
    }
    // log-space normalization for very concentrated parameters
    std::vector<double> lg(k);
    double m = -HUGE_VAL;
    for (std::size_t i = 0; i < k; ++i) {
      lg[i] = log_gamma_draw(alpha[i]);
      m = std::max(m, lg[i]);
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      out[i] = std::exp(lg[i] - m);
      sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
  }

  // cumulative-sum inversion over unnormalized weights
  std::size_t categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double target = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (target < acc) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// stable seed derivation for parallel work items (bootstrap replicates,
// sampler shards): splitmix64 of seed ^ f(index)
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace taxtopics
