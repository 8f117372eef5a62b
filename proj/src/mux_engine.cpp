#include "hsps/mux_engine.hpp"

#include <cmath>
#include <string>

#include "hsps/errors.hpp"
#include "hsps/rng.hpp"

namespace hsps {

namespace {

void require_unit(double v, const char* key) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(key, std::string(key) + " must lie in [0, 1]");
}

/// Joint weights P(k pairs, herald) for one bin.
std::vector<double> herald_joint(const ExperimentConfig& cfg, const PhotonNumberDistribution& pairs) {
  std::vector<double> joint(static_cast<std::size_t>(pairs.k_max()) + 1, 0.0);
  for (int k = 0; k <= pairs.k_max(); ++k) {
    if (pairs[k] > 0.0) joint[static_cast<std::size_t>(k)] = pairs[k] * herald_prob_given_pairs(k, cfg.trigger);
  }
  return joint;
}

double se_proportion(std::uint64_t hits, std::uint64_t n) {
  if (n == 0) return 0.0;
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(mu >= 0.0)) throw ConfigError("mu", "mu must be non-negative");
  if (!(tau_ns > 0.0)) throw ConfigError("tau_ns", "tau_ns must be positive");
  if (n_bins < 1) throw ConfigError("n_bins", "n_bins must be >= 1");
  if (!(rep_rate_hz > 0.0)) throw ConfigError("rep_rate_hz", "rep_rate_hz must be positive");
  if (k_max < 1) throw ConfigError("k_max", "k_max must be >= 1");
  trigger.validate();
  meas.validate();
  require_unit(eta_signal_coupling, "eta_signal_coupling");
  require_unit(eta_predelay, "eta_predelay");
  require_unit(eta_shutter_out, "eta_shutter_out");
  if (!(loop_loss_per_cycle >= 0.0 && loop_loss_per_cycle < 1.0)) {
    throw ConfigError("loop_loss_per_cycle", "loop_loss_per_cycle must lie in [0, 1)");
  }
  if (cycle_offset < 0) throw ConfigError("cycle_offset", "cycle_offset must be >= 0");
  if (thermal_tail_mass(mu, k_max) >= kMaxTailMass) {
    throw ConfigError("k_max", "k_max = " + std::to_string(k_max) + " leaves a thermal tail >= 1e-10 at mu = " +
                                   std::to_string(mu) + "; need k_max >= " + std::to_string(required_k_max(mu)));
  }
}

double ExperimentConfig::path_efficiency(int birth_bin) const {
  return eta_signal_coupling * eta_predelay * std::pow(1.0 - loop_loss_per_cycle, storage_cycles(birth_bin)) *
         eta_shutter_out;
}

double per_bin_herald_prob(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto joint = herald_joint(cfg, thermal_pmf(cfg.mu, cfg.k_max));
  double p = 0.0;
  for (double v : joint) p += v;
  return p;
}

double multiplexed_heralding_prob(double p, int n) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("per-bin probability must lie in [0, 1]");
  if (n < 1) throw DomainError("number of bins must be >= 1");
  return 1.0 - std::pow(1.0 - p, n);
}

AnalyticOutput output_distribution_analytic(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto pairs = thermal_pmf(cfg.mu, cfg.k_max);
  const auto joint = herald_joint(cfg, pairs);
  double p = 0.0;
  for (double v : joint) p += v;

  AnalyticOutput out;
  out.output = PhotonNumberDistribution::vacuum(cfg.k_max);
  out.heralded = PhotonNumberDistribution::vacuum(cfg.k_max);
  if (p == 0.0) return out;

  std::vector<double> cond(joint.size());
  for (std::size_t k = 0; k < joint.size(); ++k) cond[k] = joint[k] / p;
  const PhotonNumberDistribution signal(std::move(cond), pairs.discarded_tail());

  std::vector<double> acc(static_cast<std::size_t>(cfg.k_max) + 1, 0.0);
  double p_h = 0.0;
  double cycles_num = 0.0;
  double cycles_den = 0.0;
  // Bin j is the latest herald: it heralds and bins j+1..N stay silent.
  for (int j = cfg.n_bins; j >= 1; --j) {
    const double weight = p * std::pow(1.0 - p, cfg.n_bins - j);
    if (weight == 0.0) break;
    const double eta = cfg.path_efficiency(j);
    const auto thinned = apply_loss(signal, eta);
    for (int k = 0; k <= cfg.k_max; ++k) acc[static_cast<std::size_t>(k)] += weight * thinned[k];
    p_h += weight;
    cycles_num += weight * eta * cfg.storage_cycles(j);
    cycles_den += weight * eta;
  }
  out.p_h = p_h;
  out.mean_storage_cycles = cycles_den > 0.0 ? cycles_num / cycles_den : 0.0;

  std::vector<double> heralded(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k) heralded[k] = acc[k] / p_h;
  acc[0] += 1.0 - p_h;
  out.output = PhotonNumberDistribution(std::move(acc), pairs.discarded_tail());
  out.heralded = PhotonNumberDistribution(std::move(heralded), pairs.discarded_tail());
  return out;
}

SimResult analyze(const ExperimentConfig& cfg) {
  const auto a = output_distribution_analytic(cfg);
  SimResult r;
  r.p_h = a.p_h;
  r.p_1 = a.output[1];
  r.p_2 = a.output[2];
  if (a.p_h > 0.0) r.g2_true = mean_and_g2(a.heralded).g2;
  r.counts = exact_counts(a.output, cfg.rep_rate_hz, cfg.meas.eta_meas);
  r.counts.h_hz = a.p_h * cfg.rep_rate_hz;
  if (a.p_h > 0.0) r.g2_est = estimate_g2(herald_gated(r.counts));
  return r;
}

TrialTally& TrialTally::operator+=(const TrialTally& o) noexcept {
  trials += o.trials;
  heralded += o.heralded;
  out1 += o.out1;
  out2 += o.out2;
  sum_m += o.sum_m;
  sum_m2 += o.sum_m2;
  sum_ff += o.sum_ff;
  sum_ff2 += o.sum_ff2;
  sum_mff += o.sum_mff;
  d10 += o.d10;
  d01 += o.d01;
  d11 += o.d11;
  return *this;
}

SimResult TrialTally::to_result(double rep_rate_hz) const {
  SimResult r;
  r.n_trials = trials;
  if (trials == 0) return r;
  const double n = static_cast<double>(trials);
  r.p_h = static_cast<double>(heralded) / n;
  r.p_1 = static_cast<double>(out1) / n;
  r.p_2 = static_cast<double>(out2) / n;
  r.se_p_h = se_proportion(heralded, trials);
  r.se_p_1 = se_proportion(out1, trials);
  r.se_p_2 = se_proportion(out2, trials);

  r.counts.r_hz = rep_rate_hz;
  r.counts.h_hz = r.p_h * rep_rate_hz;
  r.counts.s1_hz = static_cast<double>(d10 + d11) / n * rep_rate_hz;
  r.counts.s2_hz = static_cast<double>(d01 + d11) / n * rep_rate_hz;
  r.counts.c_hz = static_cast<double>(d11) / n * rep_rate_hz;

  if (heralded == 0) return r;
  const double nh = static_cast<double>(heralded);
  const double ym = static_cast<double>(sum_m) / nh;
  const double xm = static_cast<double>(sum_ff) / nh;
  if (ym > 0.0) {
    const double g = xm / (ym * ym);
    r.g2_true = g;
    // delta method for mean(X) / mean(Y)^2
    const double var_x = static_cast<double>(sum_ff2) / nh - xm * xm;
    const double var_y = static_cast<double>(sum_m2) / nh - ym * ym;
    const double cov = static_cast<double>(sum_mff) / nh - xm * ym;
    const double var_g = (var_x / std::pow(ym, 4) - 4.0 * xm * cov / std::pow(ym, 5) +
                          4.0 * xm * xm * var_y / std::pow(ym, 6)) /
                         nh;
    r.se_g2_true = std::sqrt(std::max(0.0, var_g));
  }
  r.g2_est = estimate_g2(herald_gated(r.counts));
  if (r.g2_est && d11 > 0) {
    // multinomial delta method on the click-pattern frequencies of gated trials
    const double p10 = static_cast<double>(d10) / nh;
    const double p01 = static_cast<double>(d01) / nh;
    const double p11 = static_cast<double>(d11) / nh;
    const double s1 = p10 + p11;
    const double s2 = p01 + p11;
    const double g11 = 1.0 / p11 - 1.0 / s1 - 1.0 / s2;
    const double g10 = -1.0 / s1;
    const double g01 = -1.0 / s2;
    const double mean = p11 * g11 + p10 * g10 + p01 * g01;
    const double second = p11 * g11 * g11 + p10 * g10 * g10 + p01 * g01 * g01;
    r.se_g2_est = *r.g2_est * std::sqrt(std::max(0.0, second - mean * mean) / nh);
  }
  return r;
}

TrialTally simulate_batch(const ExperimentConfig& cfg, std::uint64_t seed, std::uint64_t batch_index,
                          std::uint64_t n_trials, std::vector<TrialRecord>* records) {
  Rng rng = make_stream(seed, batch_index);
  const double pair_ratio = cfg.mu / (1.0 + cfg.mu);
  const bool dark = cfg.trigger.dark_count_prob_per_bin > 0.0;

  auto sample_pairs = [&]() {
    for (;;) {
      int k = 0;
      while (uniform01(rng) < pair_ratio) ++k;
      if (k <= cfg.k_max) return k;
    }
  };

  TrialTally t;
  t.trials = n_trials;
  for (std::uint64_t trial = 0; trial < n_trials; ++trial) {
    TrialRecord rec;
    int pairs = 0;
    // Bins are i.i.d., so scanning from the last bin backwards and stopping at
    // the first herald finds the latest-born heralded photon.
    for (int j = cfg.n_bins; j >= 1; --j) {
      const int k = sample_pairs();
      if (k == 0 && !dark) continue;
      const int clicks = cascade_click_distribution(k, cfg.trigger, rng);
      if (herald(clicks, cfg.trigger.policy)) {
        rec.heralded = true;
        rec.birth_bin = j;
        rec.storage_cycles = cfg.storage_cycles(j);
        rec.clicks_in_birth_bin = clicks;
        pairs = k;
        break;
      }
    }
    if (rec.heralded) {
      const double eta = cfg.path_efficiency(*rec.birth_bin);
      int m = 0;
      for (int i = 0; i < pairs; ++i) m += uniform01(rng) < eta ? 1 : 0;
      rec.output_photons = m;

      bool det1 = false;
      bool det2 = false;
      for (int i = 0; i < m; ++i) {
        if (uniform01(rng) < cfg.meas.eta_meas) {
          if (uniform01(rng) < 0.5) {
            det1 = true;
          } else {
            det2 = true;
          }
        }
      }
      const auto mu64 = static_cast<std::uint64_t>(m);
      const std::uint64_t ff = mu64 * (mu64 > 0 ? mu64 - 1 : 0);
      ++t.heralded;
      t.out1 += m == 1 ? 1 : 0;
      t.out2 += m == 2 ? 1 : 0;
      t.sum_m += mu64;
      t.sum_m2 += mu64 * mu64;
      t.sum_ff += ff;
      t.sum_ff2 += ff * ff;
      t.sum_mff += mu64 * ff;
      t.d10 += det1 && !det2 ? 1 : 0;
      t.d01 += det2 && !det1 ? 1 : 0;
      t.d11 += det1 && det2 ? 1 : 0;
    }
    if (records) records->push_back(rec);
  }
  return t;
}

namespace {

std::uint64_t batch_count(std::uint64_t n_trials) { return (n_trials + kTrialsPerBatch - 1) / kTrialsPerBatch; }

std::uint64_t batch_size(std::uint64_t n_trials, std::uint64_t b) {
  return std::min(kTrialsPerBatch, n_trials - b * kTrialsPerBatch);
}

void check_trials(const ExperimentConfig& cfg, std::uint64_t n_trials) {
  if (n_trials == 0) throw DomainError("simulation needs at least one trial");
  cfg.validate();
}

}  // namespace

SimResult simulate_trials(const ExperimentConfig& cfg, std::uint64_t n_trials, std::uint64_t seed,
                          std::vector<TrialRecord>* records) {
  check_trials(cfg, n_trials);
  const std::uint64_t batches = batch_count(n_trials);
  std::vector<TrialTally> tallies(batches);
  std::vector<std::vector<TrialRecord>> batch_records(records ? batches : 0);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(batches); ++b) {
    const auto ub = static_cast<std::uint64_t>(b);
    tallies[ub] = simulate_batch(cfg, seed, ub, batch_size(n_trials, ub), records ? &batch_records[ub] : nullptr);
  }

  TrialTally total;
  for (const auto& t : tallies) total += t;
  if (records) {
    records->clear();
    records->reserve(n_trials);
    for (auto& br : batch_records) records->insert(records->end(), br.begin(), br.end());
  }
  return total.to_result(cfg.rep_rate_hz);
}

SimResult simulate_trials_serial(const ExperimentConfig& cfg, std::uint64_t n_trials, std::uint64_t seed,
                                 std::vector<TrialRecord>* records) {
  check_trials(cfg, n_trials);
  if (records) records->clear();
  TrialTally total;
  const std::uint64_t batches = batch_count(n_trials);
  for (std::uint64_t b = 0; b < batches; ++b) total += simulate_batch(cfg, seed, b, batch_size(n_trials, b), records);
  return total.to_result(cfg.rep_rate_hz);
}

std::optional<int> loop_lifetime_cycles(double loss) {
  if (!(loss >= 0.0 && loss < 1.0)) throw DomainError("loop loss must lie in [0, 1)");
  if (loss == 0.0) return std::nullopt;
  const double inv_e = std::exp(-1.0);
  const double keep = 1.0 - loss;
  int n = std::max(1, static_cast<int>(std::ceil(-1.0 / std::log(keep))));
  while (n > 1 && std::pow(keep, n - 1) <= inv_e) --n;
  while (std::pow(keep, n) > inv_e) ++n;
  return n;
}

double calibrate_composite_efficiency(const ExperimentConfig& cfg, double target_p1) {
  auto p1_at = [&](double composite) {
    ExperimentConfig c = cfg;
    c.eta_predelay = composite;
    c.eta_shutter_out = 1.0;
    return analyze(c).p_1;
  };
  if (!(target_p1 > 0.0) || p1_at(1.0) < target_p1) {
    throw DomainError("target P1 not reachable with a composite efficiency <= 1");
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (p1_at(mid) < target_p1 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace hsps
