#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hsps/detectors.hpp"
#include "hsps/estimators.hpp"
#include "hsps/photon_stats.hpp"

namespace hsps {

/// Full parameter budget of a time-multiplexed heralded single-photon source.
struct ExperimentConfig {
  double mu = 0.18;            ///< mean pairs per pump pulse
  double tau_ns = 10.0;        ///< time-bin period
  int n_bins = 40;             ///< multiplexed time bins N
  double rep_rate_hz = 5e5;    ///< multiplexing repetition rate R
  int k_max = kDefaultKMax;    ///< photon-number truncation
  TriggerConfig trigger;
  double eta_signal_coupling = 0.88;
  double eta_predelay = 1.0;   ///< fixed fiber delay and loop injection
  double loop_loss_per_cycle = 0.012;
  double eta_shutter_out = 1.0;  ///< output shutter and second collection fiber
  MeasurementConfig meas;
  int cycle_offset = 0;        ///< extra storage cycles added to every photon

  /// Throws ConfigError naming the first offending key.
  void validate() const;

  /// Storage cycles of a photon born in bin `birth_bin` (1-based).
  int storage_cycles(int birth_bin) const noexcept { return (n_bins - birth_bin) + cycle_offset; }
  /// Signal transmission from crystal to the multiplexed output for that bin.
  double path_efficiency(int birth_bin) const;
};

/// One multiplexing period of the Monte Carlo engine.
struct TrialRecord {
  bool heralded = false;
  std::optional<int> birth_bin;  ///< 1..N, latest heralded bin
  int storage_cycles = 0;
  int output_photons = 0;
  int clicks_in_birth_bin = 0;
};

/// Multiplexed-output figures of merit. p_1 and p_2 are per multiplexing
/// period; both g2 values are conditioned on heralded periods.
struct SimResult {
  double p_h = 0.0;
  double p_1 = 0.0;
  double p_2 = 0.0;
  std::optional<double> g2_true;  ///< moment g2 of the heralded output state
  std::optional<double> g2_est;   ///< C R / (S1 S2) on herald-gated counts
  double se_p_h = 0.0;
  double se_p_1 = 0.0;
  double se_p_2 = 0.0;
  double se_g2_true = 0.0;
  double se_g2_est = 0.0;
  std::uint64_t n_trials = 0;     ///< zero for analytic results
  CountRates counts;              ///< measurement-detector rates, ungated
};

/// Probability that a single bin heralds.
double per_bin_herald_prob(const ExperimentConfig& cfg);

/// 1 - (1 - p)^n.
double multiplexed_heralding_prob(double p, int n);

struct AnalyticOutput {
  double p_h = 0.0;
  PhotonNumberDistribution output;    ///< per period, vacuum when nothing heralds
  PhotonNumberDistribution heralded;  ///< conditioned on a herald
  double mean_storage_cycles = 0.0;   ///< weighted by herald weight x path efficiency
};

/// Exact enumeration of the latest-bin protocol.
AnalyticOutput output_distribution_analytic(const ExperimentConfig& cfg);

/// SimResult built from the analytic enumeration (standard errors zero).
SimResult analyze(const ExperimentConfig& cfg);

/// Integer tallies of a block of trials; merging is plain addition.
struct TrialTally {
  std::uint64_t trials = 0;
  std::uint64_t heralded = 0;
  std::uint64_t out1 = 0;
  std::uint64_t out2 = 0;
  // moments of the output photon number m over heralded trials
  std::uint64_t sum_m = 0;
  std::uint64_t sum_m2 = 0;
  std::uint64_t sum_ff = 0;   // m(m-1)
  std::uint64_t sum_ff2 = 0;  // (m(m-1))^2
  std::uint64_t sum_mff = 0;  // m * m(m-1)
  // measurement click patterns (detector1, detector2)
  std::uint64_t d10 = 0;
  std::uint64_t d01 = 0;
  std::uint64_t d11 = 0;

  TrialTally& operator+=(const TrialTally& other) noexcept;
  SimResult to_result(double rep_rate_hz) const;
};

/// Trials per independently seeded batch. Batch b always uses substream b, so
/// results do not depend on how batches are spread over threads.
inline constexpr std::uint64_t kTrialsPerBatch = 1u << 15;

/// Runs batch `batch_index` of a simulation (the kernel shared by both drivers).
TrialTally simulate_batch(const ExperimentConfig& cfg, std::uint64_t seed, std::uint64_t batch_index,
                          std::uint64_t n_trials, std::vector<TrialRecord>* records = nullptr);

/// Monte Carlo counterpart of `analyze`, batches run in parallel with OpenMP.
SimResult simulate_trials(const ExperimentConfig& cfg, std::uint64_t n_trials, std::uint64_t seed,
                          std::vector<TrialRecord>* records = nullptr);

/// Serial reference driver; bit-identical to `simulate_trials`.
SimResult simulate_trials_serial(const ExperimentConfig& cfg, std::uint64_t n_trials, std::uint64_t seed,
                                 std::vector<TrialRecord>* records = nullptr);

/// Smallest n with (1 - loss)^n <= 1/e; empty for a lossless loop.
std::optional<int> loop_lifetime_cycles(double loop_loss_per_cycle);

/// Solves for the composite eta_predelay * eta_shutter_out that gives the
/// analytic P1 `target_p1` (returned value is stored in eta_predelay with the
/// shutter at 1). Throws DomainError when the target is out of reach.
double calibrate_composite_efficiency(const ExperimentConfig& cfg, double target_p1);

}  // namespace hsps
