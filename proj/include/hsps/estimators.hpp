#pragma once

#include <optional>

#include "hsps/photon_stats.hpp"

namespace hsps {

/// Detector-level observables of the multiplexed output, all in Hz.
struct CountRates {
  double s1_hz = 0.0;  ///< singles, detector 1
  double s2_hz = 0.0;  ///< singles, detector 2
  double c_hz = 0.0;   ///< coincidences between detectors 1 and 2
  double h_hz = 0.0;   ///< heralding signals
  double r_hz = 0.0;   ///< multiplexing repetition rate

  /// Checks the non-negativity and ordering invariants; throws DomainError.
  void validate() const;
};

/// Count rates for a state carrying only one- and two-photon components,
/// bucket detectors behind a 50/50 splitter with net transmission eta.
/// h_hz is left at zero; the caller owns the herald rate.
CountRates predict_counts(double p1, double p2, double r_hz, double eta);

/// Count rates of the same detection setup for an arbitrary photon-number
/// distribution (no truncation at two photons).
CountRates exact_counts(const PhotonNumberDistribution& dist, double r_hz, double eta);

struct P1Estimate {
  double raw = 0.0;      ///< formula value, may fall outside [0, 1] on noisy counts
  double clamped = 0.0;  ///< raw clamped to [0, 1]
};

/// P1 = (S1 + S2 - C (4/eta - 1)) / (R eta).
P1Estimate estimate_p1(const CountRates& counts, double eta);

/// g2(0) = C R / (S1 S2); empty when either singles rate is zero.
std::optional<double> estimate_g2(const CountRates& counts);

/// P_H = H / R.
double estimate_ph(const CountRates& counts);

/// Counts normalized to heralded periods: the repetition rate is replaced by
/// the herald rate, as when the analysis window is opened only on a herald.
CountRates herald_gated(const CountRates& counts);

/// max(0, raw - accidental).
double accidental_subtract(double raw, double accidental);

}  // namespace hsps
