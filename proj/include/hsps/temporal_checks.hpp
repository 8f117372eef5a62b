#pragma once

#include <optional>

namespace hsps {

/// Storage-loop figures that decide whether multiplexed photons stay
/// temporally indistinguishable.
struct DelayLineSpec {
  double loss_per_cycle = 0.012;
  double cycle_ns = 10.0;
  double gvd_ps2_per_cycle = 1.2e-3;
  double drift_ps_per_hour = 0.01;
  double pulse_sigma_ps = 6.1;

  void validate() const;
};

/// FWHM of a Gaussian intensity profile -> rms width.
double fwhm_to_sigma(double fwhm);

/// (1 - loss)^n.
double survival_after_cycles(const DelayLineSpec& spec, int n);

/// rms width after n cycles of accumulated GVD, sigma^2 + (phi2 / 2 sigma)^2.
double dispersion_broadening(const DelayLineSpec& spec, int n);

/// How 6.1 ps is read: as the rms width itself or as the FWHM.
enum class DurationConvention { Sigma, Fwhm };

struct HealthReport {
  DurationConvention convention = DurationConvention::Fwhm;
  double sigma_ps = 0.0;
  int cycles = 0;
  std::optional<int> lifetime_cycles;
  double lifetime_ns = 0.0;
  double survival = 0.0;
  double broadened_sigma_ps = 0.0;
  double broadening_rel = 0.0;
  double drift_ps = 0.0;
  double overlap = 0.0;  ///< drift plus GVD over `cycles`
};

/// Delay-line report for photons stored `cycles` times with the given
/// relative timing drift.
HealthReport build_health_report(const DelayLineSpec& spec, int cycles, double drift_ps,
                                 DurationConvention convention);

}  // namespace hsps
