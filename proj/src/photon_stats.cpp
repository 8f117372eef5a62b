#include "hsps/photon_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hsps/errors.hpp"

namespace hsps {

namespace {

constexpr double kNormTol = 1e-9;
constexpr double kRoundoff = 1e-14;

void check_probability(double eta, const char* what) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(eta));
  }
}

}  // namespace

PhotonNumberDistribution::PhotonNumberDistribution() : probs_{1.0} {}

PhotonNumberDistribution::PhotonNumberDistribution(std::vector<double> probs, double discarded_tail)
    : probs_(std::move(probs)), discarded_tail_(discarded_tail) {
  if (probs_.empty()) throw DomainError("photon-number distribution needs at least p(0)");
  double total = 0.0;
  for (double& p : probs_) {
    if (!(p >= -kRoundoff && p <= 1.0 + kRoundoff)) {
      throw DomainError("photon-number probability outside [0, 1]: " + std::to_string(p));
    }
    p = std::clamp(p, 0.0, 1.0);
    total += p;
  }
  if (std::abs(total - 1.0) > kNormTol) {
    throw DomainError("photon-number distribution sums to " + std::to_string(total));
  }
}

PhotonNumberDistribution PhotonNumberDistribution::vacuum(int k_max) { return fock(0, k_max); }

PhotonNumberDistribution PhotonNumberDistribution::fock(int n, int k_max) {
  if (n < 0 || k_max < n) throw DomainError("Fock state outside truncation bound");
  std::vector<double> p(static_cast<std::size_t>(k_max) + 1, 0.0);
  p[static_cast<std::size_t>(n)] = 1.0;
  return PhotonNumberDistribution(std::move(p));
}

double PhotonNumberDistribution::operator[](int k) const noexcept {
  if (k < 0 || k > k_max()) return 0.0;
  return probs_[static_cast<std::size_t>(k)];
}

PhotonNumberDistribution PhotonNumberDistribution::resized(int k_max) const {
  if (k_max < 0) throw DomainError("negative k_max");
  std::vector<double> p(static_cast<std::size_t>(k_max) + 1, 0.0);
  double dropped = 0.0;
  for (int k = 0; k <= this->k_max(); ++k) {
    if (k <= k_max) {
      p[static_cast<std::size_t>(k)] = probs_[static_cast<std::size_t>(k)];
    } else {
      dropped += probs_[static_cast<std::size_t>(k)];
    }
  }
  if (dropped > kNormTol) throw DomainError("resizing would discard probability mass");
  return PhotonNumberDistribution(std::move(p), discarded_tail_);
}

double thermal_tail_mass(double mu, int k_max) {
  if (mu < 0.0) throw DomainError("mean pair number must be non-negative");
  if (mu == 0.0) return 0.0;
  return std::pow(mu / (1.0 + mu), k_max + 1);
}

int required_k_max(double mu, double tail_tol) {
  int k_max = 1;
  while (thermal_tail_mass(mu, k_max) >= tail_tol) ++k_max;
  return k_max;
}

PhotonNumberDistribution thermal_pmf(double mu, int k_max) {
  if (!(mu >= 0.0)) throw DomainError("mean pair number must be non-negative");
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  std::vector<double> p(static_cast<std::size_t>(k_max) + 1, 0.0);
  const double ratio = mu / (1.0 + mu);
  double term = 1.0 / (1.0 + mu);
  for (auto& pk : p) {
    pk = term;
    term *= ratio;
  }
  const double tail = thermal_tail_mass(mu, k_max);
  const double kept = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& pk : p) pk /= kept;
  return PhotonNumberDistribution(std::move(p), tail);
}

PhotonNumberDistribution apply_loss(const PhotonNumberDistribution& dist, double eta) {
  check_probability(eta, "transmission");
  if (eta == 1.0) return dist;
  const int k_max = dist.k_max();
  std::vector<double> out(static_cast<std::size_t>(k_max) + 1, 0.0);
  // binom(k, m) eta^m (1-eta)^(k-m), row by row
  std::vector<double> row{1.0};
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) {
      std::vector<double> next(static_cast<std::size_t>(k) + 1, 0.0);
      for (int m = 0; m < k; ++m) {
        next[static_cast<std::size_t>(m)] += row[static_cast<std::size_t>(m)] * (1.0 - eta);
        next[static_cast<std::size_t>(m) + 1] += row[static_cast<std::size_t>(m)] * eta;
      }
      row = std::move(next);
    }
    const double pk = dist[k];
    if (pk == 0.0) continue;
    for (int m = 0; m <= k; ++m) out[static_cast<std::size_t>(m)] += pk * row[static_cast<std::size_t>(m)];
  }
  return PhotonNumberDistribution(std::move(out), dist.discarded_tail());
}

JointDistribution::JointDistribution(int k_max)
    : k_max_(k_max), cells_(static_cast<std::size_t>(k_max + 1) * static_cast<std::size_t>(k_max + 1), 0.0) {}

double JointDistribution::at(int t, int r) const {
  if (t < 0 || r < 0 || t > k_max_ || r > k_max_) return 0.0;
  return cells_[static_cast<std::size_t>(t) * static_cast<std::size_t>(k_max_ + 1) + static_cast<std::size_t>(r)];
}

double& JointDistribution::at(int t, int r) {
  if (t < 0 || r < 0 || t > k_max_ || r > k_max_) throw DomainError("joint index out of range");
  return cells_[static_cast<std::size_t>(t) * static_cast<std::size_t>(k_max_ + 1) + static_cast<std::size_t>(r)];
}

PhotonNumberDistribution JointDistribution::marginal_transmit() const {
  std::vector<double> p(static_cast<std::size_t>(k_max_) + 1, 0.0);
  for (int t = 0; t <= k_max_; ++t)
    for (int r = 0; r <= k_max_; ++r) p[static_cast<std::size_t>(t)] += at(t, r);
  return PhotonNumberDistribution(std::move(p));
}

PhotonNumberDistribution JointDistribution::marginal_reflect() const {
  std::vector<double> p(static_cast<std::size_t>(k_max_) + 1, 0.0);
  for (int t = 0; t <= k_max_; ++t)
    for (int r = 0; r <= k_max_; ++r) p[static_cast<std::size_t>(r)] += at(t, r);
  return PhotonNumberDistribution(std::move(p));
}

JointDistribution split_balanced(const PhotonNumberDistribution& dist) {
  const int k_max = dist.k_max();
  JointDistribution joint(k_max);
  std::vector<double> row{1.0};
  for (int k = 0; k <= k_max; ++k) {
    if (k > 0) {
      std::vector<double> next(static_cast<std::size_t>(k) + 1, 0.0);
      for (int m = 0; m < k; ++m) {
        next[static_cast<std::size_t>(m)] += 0.5 * row[static_cast<std::size_t>(m)];
        next[static_cast<std::size_t>(m) + 1] += 0.5 * row[static_cast<std::size_t>(m)];
      }
      row = std::move(next);
    }
    for (int m = 0; m <= k; ++m) joint.at(m, k - m) = dist[k] * row[static_cast<std::size_t>(m)];
  }
  return joint;
}

Moments mean_and_g2(const PhotonNumberDistribution& dist) {
  double mean = 0.0;
  double factorial2 = 0.0;
  for (int k = 1; k <= dist.k_max(); ++k) {
    mean += k * dist[k];
    factorial2 += static_cast<double>(k) * (k - 1) * dist[k];
  }
  Moments m;
  m.mean = mean;
  if (mean > 0.0) m.g2 = factorial2 / (mean * mean);
  return m;
}

PhotonNumberDistribution convolve(const PhotonNumberDistribution& a,
                                  const PhotonNumberDistribution& b) {
  const int k_max = a.k_max() + b.k_max();
  std::vector<double> p(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int i = 0; i <= a.k_max(); ++i)
    for (int j = 0; j <= b.k_max(); ++j) p[static_cast<std::size_t>(i + j)] += a[i] * b[j];
  return PhotonNumberDistribution(std::move(p), a.discarded_tail() + b.discarded_tail());
}

PhotonNumberDistribution mixture(std::span<const PhotonNumberDistribution> parts,
                                 std::span<const double> weights) {
  if (parts.empty() || parts.size() != weights.size()) {
    throw DomainError("mixture needs one weight per component");
  }
  const int k_max = parts.front().k_max();
  std::vector<double> p(static_cast<std::size_t>(k_max) + 1, 0.0);
  double tail = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].k_max() != k_max) throw DomainError("mixture components differ in k_max");
    for (int k = 0; k <= k_max; ++k) p[static_cast<std::size_t>(k)] += weights[i] * parts[i][k];
    tail += weights[i] * parts[i].discarded_tail();
  }
  return PhotonNumberDistribution(std::move(p), tail);
}

}  // namespace hsps
