#pragma once

#include <optional>
#include <span>
#include <vector>

namespace hsps {

/// Truncation bound used when a caller does not ask for a specific one.
inline constexpr int kDefaultKMax = 12;
/// Largest pre-truncation tail mass the engine accepts for a thermal source.
inline constexpr double kMaxTailMass = 1e-10;

/// Probability vector over photon number k = 0..k_max.
///
/// Entries are validated on construction: each lies in [0, 1] and the total is
/// 1 within 1e-9. `discarded_tail()` records the probability mass that was cut
/// off above k_max before renormalization (zero for exact distributions).
class PhotonNumberDistribution {
 public:
  /// Vacuum with k_max = 0.
  PhotonNumberDistribution();
  explicit PhotonNumberDistribution(std::vector<double> probs, double discarded_tail = 0.0);

  static PhotonNumberDistribution vacuum(int k_max);
  static PhotonNumberDistribution fock(int n, int k_max);

  int k_max() const noexcept { return static_cast<int>(probs_.size()) - 1; }
  /// p(k); zero for k outside 0..k_max.
  double operator[](int k) const noexcept;
  std::span<const double> probs() const noexcept { return probs_; }
  double discarded_tail() const noexcept { return discarded_tail_; }

  /// Same distribution padded with zeros (or checked-truncated) to a new bound.
  PhotonNumberDistribution resized(int k_max) const;

 private:
  std::vector<double> probs_;
  double discarded_tail_ = 0.0;
};

/// Single-mode thermal pair-number law p(k) = mu^k / (1 + mu)^(k+1), truncated
/// at k_max and renormalized. The discarded tail is (mu / (1 + mu))^(k_max+1).
PhotonNumberDistribution thermal_pmf(double mu, int k_max = kDefaultKMax);

/// Analytic tail mass P(k > k_max) of the untruncated thermal law.
double thermal_tail_mass(double mu, int k_max);

/// Smallest k_max >= 1 whose thermal tail mass is below `tail_tol`.
int required_k_max(double mu, double tail_tol = kMaxTailMass);

/// Binomial thinning: each photon independently survives with probability eta.
PhotonNumberDistribution apply_loss(const PhotonNumberDistribution& dist, double eta);

/// Joint photon-number distribution over the two outputs of a 50/50 splitter.
class JointDistribution {
 public:
  explicit JointDistribution(int k_max);

  int k_max() const noexcept { return k_max_; }
  double at(int k_transmit, int k_reflect) const;
  double& at(int k_transmit, int k_reflect);
  PhotonNumberDistribution marginal_transmit() const;
  PhotonNumberDistribution marginal_reflect() const;

 private:
  int k_max_;
  std::vector<double> cells_;
};

JointDistribution split_balanced(const PhotonNumberDistribution& dist);

struct Moments {
  double mean = 0.0;
  /// sum k(k-1) p(k) / mean^2; empty when the mean is zero.
  std::optional<double> g2;
};

Moments mean_and_g2(const PhotonNumberDistribution& dist);

/// Distribution of the total photon number of two independent fields.
PhotonNumberDistribution convolve(const PhotonNumberDistribution& a,
                                  const PhotonNumberDistribution& b);

/// Weighted sum of distributions sharing one k_max. Weights must sum to 1.
PhotonNumberDistribution mixture(std::span<const PhotonNumberDistribution> parts,
                                 std::span<const double> weights);

}  // namespace hsps
