#pragma once

#include <string>
#include <vector>

#include "hsps/photon_stats.hpp"
#include "hsps/rng.hpp"

namespace hsps {

enum class HeraldPolicy {
  AnyClick,    ///< herald when at least one cascade detector fires
  ExactlyOne,  ///< herald only when exactly one cascade detector fires
};

const char* to_string(HeraldPolicy policy) noexcept;
HeraldPolicy parse_herald_policy(const std::string& text);

/// Idler-arm trigger: idler path loss followed by a cascade of bucket detectors.
struct TriggerConfig {
  int cascade_size = 4;
  double eta_det = 0.62;
  double eta_idler = 0.84;
  HeraldPolicy policy = HeraldPolicy::AnyClick;
  double dark_count_prob_per_bin = 0.0;

  /// Per-photon probability of being registered somewhere in the cascade.
  double effective_efficiency() const noexcept { return eta_idler * eta_det; }
  void validate() const;
};

struct MeasurementConfig {
  /// Net transmission from the second collection fiber to the measurement
  /// detectors, detector efficiency included.
  double eta_meas = 0.426;
  void validate() const;
};

/// 1 - sum_k p(k) (1 - eta)^k.
double bucket_click_prob(const PhotonNumberDistribution& dist, double eta);

/// One Monte Carlo draw of the number of cascade detectors that fire when
/// `k_photons` idler photons arrive. Consumes no randomness for k = 0 without
/// dark counts.
int cascade_click_distribution(int k_photons, const TriggerConfig& cfg, Rng& rng);

/// Exact distribution of the clicked-detector count for `k_photons` idler
/// photons; entry c is P(c detectors fire), c = 0..cascade_size.
std::vector<double> cascade_click_pmf(int k_photons, const TriggerConfig& cfg);

bool herald(int clicks, HeraldPolicy policy) noexcept;

/// P(herald | k pairs in the bin), exact.
double herald_prob_given_pairs(int k_pairs, const TriggerConfig& cfg);

}  // namespace hsps
