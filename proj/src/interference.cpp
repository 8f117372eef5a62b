#include "hsps/interference.hpp"

#include <algorithm>
#include <cmath>

#include "hsps/errors.hpp"
#include "hsps/estimators.hpp"

namespace hsps {

namespace {

/// Probability that both bucket outputs of a 50/50 splitter fire for n
/// classically split photons with perfect detectors.
double classical_coincidence(int n) { return n >= 2 ? 1.0 - std::pow(2.0, 1 - n) : 0.0; }

struct Coincidences {
  double raw = 0.0;
  double accidental = 0.0;
};

Coincidences coincidences(const PhotonNumberDistribution& a, const PhotonNumberDistribution& b,
                          double overlap_11) {
  Coincidences c;
  for (int ka = 0; ka <= a.k_max(); ++ka) {
    if (a[ka] == 0.0) continue;
    for (int kb = 0; kb <= b.k_max(); ++kb) {
      if (b[kb] == 0.0) continue;
      const double pc = (ka == 1 && kb == 1) ? (1.0 - overlap_11) / 2.0 : classical_coincidence(ka + kb);
      c.raw += a[ka] * b[kb] * pc;
    }
  }
  // each source measured with the other blocked
  for (int k = 2; k <= a.k_max(); ++k) c.accidental += a[k] * classical_coincidence(k);
  for (int k = 2; k <= b.k_max(); ++k) c.accidental += b[k] * classical_coincidence(k);
  return c;
}

}  // namespace

void HomConfig::validate() const {
  if (!(indistinguishability >= 0.0 && indistinguishability <= 1.0)) {
    throw DomainError("indistinguishability must lie in [0, 1]");
  }
  if (!(pulse_sigma_ps > 0.0)) throw DomainError("pulse_sigma_ps must be positive");
  if (storage_cycles < 0.0) throw DomainError("storage_cycles must be non-negative");
  meas.validate();
}

double temporal_overlap(double delay_ps, double extra_drift_ps, double cycles, double gvd_ps2_per_cycle,
                        double pulse_sigma_ps) {
  if (!(pulse_sigma_ps > 0.0)) throw DomainError("pulse_sigma_ps must be positive");
  if (std::isinf(delay_ps) || std::isinf(extra_drift_ps)) return 0.0;
  // Spectral intensity exp(-2 sigma^2 w^2); pulse a picks up phase phi2 w^2 / 2.
  // |int exp(-(2 s^2 - i phi2/2) w^2 + i w d) dw|^2, normalized.
  const double d = delay_ps + extra_drift_ps;
  const double s2 = pulse_sigma_ps * pulse_sigma_ps;
  const double phi2 = cycles * gvd_ps2_per_cycle;
  const double mod_a = std::hypot(2.0 * s2, phi2 / 2.0);
  return 2.0 * s2 / mod_a * std::exp(-d * d * s2 / (mod_a * mod_a));
}

HomResult hom_scan(const HomConfig& cfg) {
  cfg.validate();
  const auto a = apply_loss(cfg.dist_a, cfg.meas.eta_meas);
  const auto b = apply_loss(cfg.dist_b, cfg.meas.eta_meas);

  HomResult r;
  r.delays_ps = cfg.delay_scan_ps;
  const auto far = coincidences(a, b, 0.0);
  r.c_far = far.raw;
  r.accidental_far = far.accidental;
  const double drift = cfg.drift_ps_per_cycle * cfg.storage_cycles;
  double c_dip = far.raw;
  for (double delay : cfg.delay_scan_ps) {
    const double overlap = cfg.indistinguishability *
                           temporal_overlap(delay, drift, cfg.storage_cycles, cfg.gvd_ps2_per_cycle, cfg.pulse_sigma_ps);
    const auto c = coincidences(a, b, overlap);
    r.coincidences.push_back(c.raw);
    r.accidentals.push_back(c.accidental);
    c_dip = std::min(c_dip, c.raw);
  }
  if (r.c_far > 0.0) {
    r.v_raw = (r.c_far - c_dip) / r.c_far;
    const double far_sub = accidental_subtract(r.c_far, r.accidental_far);
    if (far_sub > 0.0) {
      const double dip_sub = accidental_subtract(c_dip, r.accidental_far);
      r.v_sub = std::clamp((far_sub - dip_sub) / far_sub, 0.0, 1.0);
    }
  }
  return r;
}

void HomSettings::validate() const {
  if (!(mu_ref >= 0.0)) throw ConfigError("hom.mu_ref", "hom.mu_ref must be non-negative");
  if (!(indistinguishability >= 0.0 && indistinguishability <= 1.0)) {
    throw ConfigError("hom.indistinguishability", "hom.indistinguishability must lie in [0, 1]");
  }
  if (!(pulse_sigma_ps > 0.0)) throw ConfigError("hom.pulse_sigma_ps", "hom.pulse_sigma_ps must be positive");
  if (!(drift_ps_per_cycle >= 0.0)) {
    throw ConfigError("hom.drift_ps_per_cycle", "hom.drift_ps_per_cycle must be non-negative");
  }
  if (!(gvd_ps2_per_cycle >= 0.0)) {
    throw ConfigError("hom.gvd_ps2_per_cycle", "hom.gvd_ps2_per_cycle must be non-negative");
  }
  if (delay_points < 1) throw ConfigError("hom.delay_points", "hom.delay_points must be >= 1");
  if (!(delay_max_ps >= delay_min_ps)) throw ConfigError("hom.delay_max_ps", "hom.delay_max_ps < hom.delay_min_ps");
}

std::vector<double> HomSettings::delays() const {
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(delay_points));
  if (delay_points == 1) return {delay_min_ps};
  const double step = (delay_max_ps - delay_min_ps) / (delay_points - 1);
  for (int i = 0; i < delay_points; ++i) d.push_back(delay_min_ps + step * i);
  return d;
}

PhotonNumberDistribution reference_source(const ExperimentConfig& mux, double mu_ref) {
  ExperimentConfig ref = mux;
  ref.mu = mu_ref;
  ref.n_bins = 1;
  ref.cycle_offset = 0;
  ref.k_max = std::max(mux.k_max, required_k_max(mu_ref));
  return output_distribution_analytic(ref).heralded;
}

HomConfig make_hom_config(const ExperimentConfig& mux, const HomSettings& s) {
  s.validate();
  const auto out = output_distribution_analytic(mux);
  HomConfig cfg;
  cfg.dist_a = out.heralded;
  cfg.dist_b = reference_source(mux, s.mu_ref);
  cfg.indistinguishability = s.indistinguishability;
  cfg.delay_scan_ps = s.delays();
  cfg.pulse_sigma_ps = s.pulse_sigma_ps;
  cfg.drift_ps_per_cycle = s.drift_ps_per_cycle;
  cfg.gvd_ps2_per_cycle = s.gvd_ps2_per_cycle;
  cfg.storage_cycles = out.mean_storage_cycles;
  cfg.meas = mux.meas;
  return cfg;
}

std::vector<VisibilityRow> visibility_vs_mu(const std::vector<ExperimentConfig>& scenarios,
                                            const HomSettings& settings) {
  if (scenarios.empty()) throw DomainError("visibility_vs_mu needs at least one scenario");
  std::vector<VisibilityRow> rows;
  rows.reserve(scenarios.size());
  for (const auto& sc : scenarios) {
    const auto res = hom_scan(make_hom_config(sc, settings));
    rows.push_back({sc.mu, res.v_raw, res.v_sub});
  }
  return rows;
}

}  // namespace hsps
