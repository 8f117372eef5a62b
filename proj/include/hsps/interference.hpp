#pragma once

#include <optional>
#include <vector>

#include "hsps/mux_engine.hpp"
#include "hsps/photon_stats.hpp"

namespace hsps {

/// Two-source Hong-Ou-Mandel scan between the multiplexed output (a) and a
/// weak non-multiplexed reference source (b), both herald-conditioned.
struct HomConfig {
  PhotonNumberDistribution dist_a;
  PhotonNumberDistribution dist_b;
  double indistinguishability = 0.91;  ///< spectral overlap I
  std::vector<double> delay_scan_ps;
  double pulse_sigma_ps = 6.1;
  double drift_ps_per_cycle = 0.01;    ///< cycle-length mismatch, accumulated over storage
  double gvd_ps2_per_cycle = 1.2e-3;
  double storage_cycles = 0.0;         ///< cycles spent in the loop by photon a
  MeasurementConfig meas;

  void validate() const;
};

struct HomResult {
  std::vector<double> delays_ps;
  std::vector<double> coincidences;  ///< coincidence probability per gated trial
  std::vector<double> accidentals;   ///< single-source coincidences at each delay
  double c_far = 0.0;                ///< infinite-delay (fully distinguishable) level
  double accidental_far = 0.0;
  std::optional<double> v_raw;
  std::optional<double> v_sub;
};

/// Overlap |<psi_a|psi_b>|^2 of two transform-limited Gaussian pulses with rms
/// intensity width `pulse_sigma_ps`, offset by delay + extra drift, where
/// pulse a carries the group-delay dispersion of `cycles` loop passes.
double temporal_overlap(double delay_ps, double extra_drift_ps, double cycles, double gvd_ps2_per_cycle,
                        double pulse_sigma_ps);

HomResult hom_scan(const HomConfig& cfg);

/// Reference-source settings used to build a HomConfig around an ExperimentConfig.
struct HomSettings {
  double mu_ref = 0.008;
  double indistinguishability = 0.91;
  double pulse_sigma_ps = 6.1;
  double drift_ps_per_cycle = 0.01;
  double gvd_ps2_per_cycle = 1.2e-3;
  double delay_min_ps = -30.0;
  double delay_max_ps = 30.0;
  int delay_points = 61;

  void validate() const;
  std::vector<double> delays() const;
};

/// Herald-conditioned output of the reference source: the multiplexed source's
/// coupling budget with mu = mu_ref, one bin and no storage.
PhotonNumberDistribution reference_source(const ExperimentConfig& mux, double mu_ref);

HomConfig make_hom_config(const ExperimentConfig& mux, const HomSettings& settings);

struct VisibilityRow {
  double mu = 0.0;
  std::optional<double> v_raw;
  std::optional<double> v_sub;
};

std::vector<VisibilityRow> visibility_vs_mu(const std::vector<ExperimentConfig>& scenarios,
                                            const HomSettings& settings);

}  // namespace hsps
