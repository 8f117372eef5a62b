#include "hsps/detectors.hpp"

#include <cmath>
#include <string>

#include "hsps/errors.hpp"

namespace hsps {

const char* to_string(HeraldPolicy policy) noexcept {
  switch (policy) {
    case HeraldPolicy::AnyClick:
      return "any_click";
    case HeraldPolicy::ExactlyOne:
      return "exactly_one";
  }
  return "?";
}

HeraldPolicy parse_herald_policy(const std::string& text) {
  if (text == "any_click" || text == "ANY_CLICK") return HeraldPolicy::AnyClick;
  if (text == "exactly_one" || text == "EXACTLY_ONE") return HeraldPolicy::ExactlyOne;
  throw DomainError("unknown heralding policy '" + text + "'");
}

void TriggerConfig::validate() const {
  if (cascade_size < 1) throw ConfigError("trigger.cascade_size", "trigger.cascade_size must be >= 1");
  auto unit = [](double v, const char* key) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(key, std::string(key) + " must lie in [0, 1]");
  };
  unit(eta_det, "trigger.eta_det");
  unit(eta_idler, "trigger.eta_idler");
  unit(dark_count_prob_per_bin, "trigger.dark_count_prob_per_bin");
}

void MeasurementConfig::validate() const {
  if (!(eta_meas >= 0.0 && eta_meas <= 1.0)) {
    throw ConfigError("meas.eta_meas", "meas.eta_meas must lie in [0, 1]");
  }
}

double bucket_click_prob(const PhotonNumberDistribution& dist, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("detector efficiency must lie in [0, 1]");
  double silent = 0.0;
  double miss = 1.0;
  for (int k = 0; k <= dist.k_max(); ++k) {
    silent += dist[k] * miss;
    miss *= 1.0 - eta;
  }
  return 1.0 - silent;
}

int cascade_click_distribution(int k_photons, const TriggerConfig& cfg, Rng& rng) {
  if (k_photons < 0) throw DomainError("negative photon number");
  const bool dark = cfg.dark_count_prob_per_bin > 0.0;
  if (k_photons == 0 && !dark) return 0;

  // photons landing on each detector
  std::vector<int> received(static_cast<std::size_t>(cfg.cascade_size), 0);
  std::uniform_int_distribution<int> route(0, cfg.cascade_size - 1);
  for (int i = 0; i < k_photons; ++i) {
    if (uniform01(rng) < cfg.eta_idler) ++received[static_cast<std::size_t>(route(rng))];
  }
  int clicks = 0;
  for (int m : received) {
    double fire = m > 0 ? 1.0 - std::pow(1.0 - cfg.eta_det, m) : 0.0;
    if (dark) fire = 1.0 - (1.0 - fire) * (1.0 - cfg.dark_count_prob_per_bin);
    if (fire > 0.0 && uniform01(rng) < fire) ++clicks;
  }
  return clicks;
}

std::vector<double> cascade_click_pmf(int k_photons, const TriggerConfig& cfg) {
  if (k_photons < 0) throw DomainError("negative photon number");
  const int d = cfg.cascade_size;
  const double a = cfg.effective_efficiency();
  // A bucket detector hit by m photons fires with 1-(1-eta_det)^m, i.e. iff at
  // least one photon is registered, so each photon is independently registered
  // on a given detector with probability a/d. Track how many distinct
  // detectors have registered a photon.
  std::vector<double> hit(static_cast<std::size_t>(d) + 1, 0.0);
  hit[0] = 1.0;
  for (int i = 0; i < k_photons; ++i) {
    std::vector<double> next(hit.size(), 0.0);
    for (int s = 0; s <= d; ++s) {
      const double ps = hit[static_cast<std::size_t>(s)];
      if (ps == 0.0) continue;
      const double fresh = a * static_cast<double>(d - s) / d;
      next[static_cast<std::size_t>(s)] += ps * (1.0 - fresh);
      if (s < d) next[static_cast<std::size_t>(s) + 1] += ps * fresh;
    }
    hit = std::move(next);
  }
  // dark counts on detectors that registered nothing
  const double q = cfg.dark_count_prob_per_bin;
  std::vector<double> pmf(static_cast<std::size_t>(d) + 1, 0.0);
  for (int s = 0; s <= d; ++s) {
    const double ps = hit[static_cast<std::size_t>(s)];
    if (ps == 0.0) continue;
    const int idle = d - s;
    double binom = 1.0;
    for (int j = 0; j <= idle; ++j) {
      if (j > 0) binom = binom * (idle - j + 1) / j;
      pmf[static_cast<std::size_t>(s + j)] += ps * binom * std::pow(q, j) * std::pow(1.0 - q, idle - j);
    }
  }
  return pmf;
}

bool herald(int clicks, HeraldPolicy policy) noexcept {
  switch (policy) {
    case HeraldPolicy::AnyClick:
      return clicks >= 1;
    case HeraldPolicy::ExactlyOne:
      return clicks == 1;
  }
  return false;
}

double herald_prob_given_pairs(int k_pairs, const TriggerConfig& cfg) {
  const auto pmf = cascade_click_pmf(k_pairs, cfg);
  double p = 0.0;
  for (std::size_t c = 0; c < pmf.size(); ++c) {
    if (herald(static_cast<int>(c), cfg.policy)) p += pmf[c];
  }
  return p;
}

}  // namespace hsps
