#include "hsps/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hsps/errors.hpp"

namespace hsps {

namespace {
void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}
}  // namespace

void CountRates::validate() const {
  if (s1_hz < 0 || s2_hz < 0 || c_hz < 0 || h_hz < 0 || r_hz < 0) {
    throw DomainError("count rates must be non-negative");
  }
  const double slack = 1e-9 * std::max({1.0, s1_hz, s2_hz, r_hz});
  if (c_hz > std::min(s1_hz, s2_hz) + slack) throw DomainError("coincidences exceed singles");
  if (h_hz > r_hz + slack) throw DomainError("herald rate exceeds repetition rate");
}

CountRates predict_counts(double p1, double p2, double r_hz, double eta) {
  check_unit(p1, "p1");
  check_unit(p2, "p2");
  check_unit(eta, "eta");
  if (r_hz < 0) throw DomainError("repetition rate must be non-negative");
  CountRates c;
  const double singles = p1 * r_hz * eta / 2.0 + p2 * r_hz * (eta / 2.0 + eta * (2.0 - eta) / 4.0);
  c.s1_hz = singles;
  c.s2_hz = singles;
  c.c_hz = p2 * r_hz * eta * eta / 2.0;
  c.r_hz = r_hz;
  return c;
}

CountRates exact_counts(const PhotonNumberDistribution& dist, double r_hz, double eta) {
  check_unit(eta, "eta");
  // Each photon reaches a given detector with eta/2 and the other with eta/2.
  double silent_one = 0.0;   // sum p(k) (1 - eta/2)^k
  double silent_both = 0.0;  // sum p(k) (1 - eta)^k
  double a = 1.0;
  double b = 1.0;
  for (int k = 0; k <= dist.k_max(); ++k) {
    silent_one += dist[k] * a;
    silent_both += dist[k] * b;
    a *= 1.0 - eta / 2.0;
    b *= 1.0 - eta;
  }
  CountRates c;
  c.s1_hz = r_hz * (1.0 - silent_one);
  c.s2_hz = c.s1_hz;
  c.c_hz = r_hz * std::max(0.0, 1.0 - 2.0 * silent_one + silent_both);
  c.r_hz = r_hz;
  return c;
}

P1Estimate estimate_p1(const CountRates& counts, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("eta must lie in (0, 1]");
  if (!(counts.r_hz > 0.0)) throw DomainError("repetition rate must be positive");
  P1Estimate e;
  e.raw = (counts.s1_hz + counts.s2_hz - counts.c_hz * (4.0 / eta - 1.0)) / (counts.r_hz * eta);
  e.clamped = std::clamp(e.raw, 0.0, 1.0);
  return e;
}

std::optional<double> estimate_g2(const CountRates& counts) {
  if (!(counts.s1_hz > 0.0 && counts.s2_hz > 0.0)) return std::nullopt;
  return counts.c_hz * counts.r_hz / (counts.s1_hz * counts.s2_hz);
}

double estimate_ph(const CountRates& counts) {
  if (!(counts.r_hz > 0.0)) throw DomainError("repetition rate must be positive");
  return counts.h_hz / counts.r_hz;
}

CountRates herald_gated(const CountRates& counts) {
  CountRates g = counts;
  g.r_hz = counts.h_hz;
  return g;
}

double accidental_subtract(double raw, double accidental) {
  if (raw < 0 || accidental < 0) throw DomainError("coincidence rates must be non-negative");
  return std::max(0.0, raw - accidental);
}

}  // namespace hsps
