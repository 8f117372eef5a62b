#pragma once

// Shared helpers for the unit and acceptance suites: independent oracles and
// small random generators for property checks.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hsps/photon_stats.hpp"

namespace hsps::testing {

/// binom(n, k) via lgamma; independent of the library's Pascal recursion.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

/// Untruncated thermal term mu^k / (1 + mu)^(k+1).
inline double thermal_term(double mu, int k) { return std::pow(mu, k) / std::pow(1.0 + mu, k + 1); }

/// Brute-force thinning by direct double sum.
inline std::vector<double> thin_brute(const std::vector<double>& p, double eta) {
  std::vector<double> out(p.size(), 0.0);
  for (std::size_t k = 0; k < p.size(); ++k)
    for (std::size_t m = 0; m <= k; ++m)
      out[m] += p[k] * binomial(static_cast<int>(k), static_cast<int>(m)) * std::pow(eta, static_cast<double>(m)) *
                std::pow(1.0 - eta, static_cast<double>(k - m));
  return out;
}

/// Random normalized distribution over 0..k_max.
inline PhotonNumberDistribution random_distribution(std::mt19937_64& rng, int k_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(static_cast<std::size_t>(k_max) + 1);
  double total = 0.0;
  for (auto& v : p) {
    v = std::pow(u(rng), 3.0);
    total += v;
  }
  for (auto& v : p) v /= total;
  return PhotonNumberDistribution(std::move(p));
}

/// Standard error of a Bernoulli frequency.
inline double bernoulli_se(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

}  // namespace hsps::testing
