#include "hsps/temporal_checks.hpp"

#include <cmath>

#include "hsps/errors.hpp"
#include "hsps/interference.hpp"
#include "hsps/mux_engine.hpp"

namespace hsps {

void DelayLineSpec::validate() const {
  if (!(loss_per_cycle > 0.0 && loss_per_cycle < 1.0)) {
    throw ConfigError("delay_line.loss_per_cycle", "loss per cycle must lie in (0, 1)");
  }
  if (!(cycle_ns > 0.0)) throw ConfigError("delay_line.cycle_ns", "cycle_ns must be positive");
  if (!(gvd_ps2_per_cycle >= 0.0)) throw ConfigError("delay_line.gvd_ps2_per_cycle", "gvd must be non-negative");
  if (!(drift_ps_per_hour >= 0.0)) throw ConfigError("delay_line.drift_ps_per_hour", "drift must be non-negative");
  if (!(pulse_sigma_ps > 0.0)) throw ConfigError("delay_line.pulse_sigma_ps", "pulse width must be positive");
}

double fwhm_to_sigma(double fwhm) { return fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0))); }

double survival_after_cycles(const DelayLineSpec& spec, int n) {
  if (n < 0) throw DomainError("cycle count must be non-negative");
  return std::pow(1.0 - spec.loss_per_cycle, n);
}

double dispersion_broadening(const DelayLineSpec& spec, int n) {
  if (n < 0) throw DomainError("cycle count must be non-negative");
  const double phi2 = n * spec.gvd_ps2_per_cycle;
  const double s = spec.pulse_sigma_ps;
  return std::sqrt(s * s + (phi2 / (2.0 * s)) * (phi2 / (2.0 * s)));
}

HealthReport build_health_report(const DelayLineSpec& spec, int cycles, double drift_ps,
                                 DurationConvention convention) {
  spec.validate();
  DelayLineSpec s = spec;
  if (convention == DurationConvention::Fwhm) s.pulse_sigma_ps = fwhm_to_sigma(spec.pulse_sigma_ps);
  HealthReport r;
  r.convention = convention;
  r.sigma_ps = s.pulse_sigma_ps;
  r.cycles = cycles;
  r.lifetime_cycles = loop_lifetime_cycles(s.loss_per_cycle);
  r.lifetime_ns = r.lifetime_cycles ? *r.lifetime_cycles * s.cycle_ns : 0.0;
  r.survival = survival_after_cycles(s, cycles);
  r.broadened_sigma_ps = dispersion_broadening(s, cycles);
  r.broadening_rel = r.broadened_sigma_ps / s.pulse_sigma_ps - 1.0;
  r.drift_ps = drift_ps;
  r.overlap = temporal_overlap(0.0, drift_ps, cycles, s.gvd_ps2_per_cycle, s.pulse_sigma_ps);
  return r;
}

}  // namespace hsps
