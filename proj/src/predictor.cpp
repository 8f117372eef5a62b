#include "hsps/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hsps/errors.hpp"

namespace hsps {

double coincidence_rate(double p_1, double r_hz, int m) {
  if (m < 1) throw DomainError("fold count must be >= 1");
  if (!(p_1 >= 0.0 && p_1 <= 1.0)) throw DomainError("p_1 must lie in [0, 1]");
  return std::pow(p_1, m) * r_hz;
}

ComparisonTable build_comparison_table(const std::vector<SourceFigures>& rows, const std::vector<int>& folds) {
  if (rows.empty()) throw DomainError("comparison table needs at least one row");
  ComparisonTable t;
  t.folds = folds;
  for (const auto& src : rows) {
    ComparisonRow row{src, {}};
    for (int m : folds) row.rates.push_back(coincidence_rate(src.p_1, src.r_hz, m));
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what, "cannot parse '" + text + "' as a number for " + what);
  }
}

}  // namespace

std::vector<SourceFigures> load_source_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open source table '" + path + "'");
  static const std::vector<std::string> kHeader = {
      "label", "method", "r_hz", "p_1", "g2", "indistinguishability", "c10_quoted", "c30_quoted"};
  std::string line;
  std::vector<SourceFigures> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto cells = split_csv(line);
    if (!header_seen) {
      if (cells != kHeader) throw ConfigError("header", "unexpected source table header in '" + path + "'");
      header_seen = true;
      continue;
    }
    if (cells.size() != kHeader.size()) throw ConfigError("row", "malformed source row: " + line);
    SourceFigures f;
    f.label = cells[0];
    f.method = cells[1];
    f.r_hz = to_double(cells[2], "r_hz");
    f.p_1 = to_double(cells[3], "p_1");
    f.g2 = to_double(cells[4], "g2");
    f.indistinguishability = to_double(cells[5], "indistinguishability");
    if (!cells[6].empty()) f.quoted_rates.emplace_back(10, to_double(cells[6], "c10_quoted"));
    if (!cells[7].empty()) f.quoted_rates.emplace_back(30, to_double(cells[7], "c30_quoted"));
    rows.push_back(std::move(f));
  }
  if (rows.empty()) throw ConfigError("row", "source table '" + path + "' has no rows");
  return rows;
}

SourceFigures figures_from_config(const ExperimentConfig& cfg, double indistinguishability, std::string label) {
  const auto r = analyze(cfg);
  SourceFigures f;
  f.label = std::move(label);
  f.method = "MUX-HSPS";
  f.r_hz = cfg.rep_rate_hz;
  f.p_1 = r.p_1;
  f.g2 = r.g2_est.value_or(0.0);
  f.indistinguishability = indistinguishability;
  return f;
}

TradeoffPoint evaluate_point(const ExperimentConfig& tmpl, double mu, int n_bins) {
  ExperimentConfig cfg = tmpl;
  cfg.mu = mu;
  cfg.n_bins = n_bins;
  cfg.k_max = std::max(tmpl.k_max, required_k_max(mu));
  const auto r = analyze(cfg);
  return {mu, n_bins, r.p_1, r.g2_est.value_or(0.0)};
}

std::vector<TradeoffPoint> evaluate_grid(const ExperimentConfig& tmpl, const std::vector<double>& mus,
                                         const std::vector<int>& bins) {
  const auto nm = static_cast<std::int64_t>(mus.size());
  const auto nb = static_cast<std::int64_t>(bins.size());
  std::vector<TradeoffPoint> out(static_cast<std::size_t>(nm * nb));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t idx = 0; idx < nm * nb; ++idx) {
    out[static_cast<std::size_t>(idx)] =
        evaluate_point(tmpl, mus[static_cast<std::size_t>(idx % nm)], bins[static_cast<std::size_t>(idx / nm)]);
  }
  return out;
}

std::vector<TradeoffPoint> evaluate_grid_serial(const ExperimentConfig& tmpl, const std::vector<double>& mus,
                                                const std::vector<int>& bins) {
  std::vector<TradeoffPoint> out;
  out.reserve(mus.size() * bins.size());
  for (int n : bins)
    for (double mu : mus) out.push_back(evaluate_point(tmpl, mu, n));
  return out;
}

namespace {

/// Strictly better, or equal P1 at smaller mu.
bool better(const TradeoffPoint& a, const TradeoffPoint& b) {
  if (a.p_1 != b.p_1) return a.p_1 > b.p_1;
  return a.mu < b.mu;
}

/// Largest mu in [lo, hi] with g2 <= g2_max, assuming g2 increases with mu
/// and g2(lo) is feasible.
double feasible_edge(const ExperimentConfig& tmpl, int n, double lo, double hi, double g2_max) {
  if (evaluate_point(tmpl, hi, n).g2 <= g2_max) return hi;
  for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (evaluate_point(tmpl, mid, n).g2 <= g2_max ? lo : hi) = mid;
  }
  return lo;
}

TradeoffPoint golden_max(const ExperimentConfig& tmpl, int n, double lo, double hi) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = evaluate_point(tmpl, x1, n).p_1;
  double f2 = evaluate_point(tmpl, x2, n).p_1;
  for (int it = 0; it < 200 && b - a > 1e-10 * b; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = evaluate_point(tmpl, x1, n).p_1;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = evaluate_point(tmpl, x2, n).p_1;
    }
  }
  TradeoffPoint best = evaluate_point(tmpl, 0.5 * (a + b), n);
  for (double edge : {lo, hi}) {
    const auto p = evaluate_point(tmpl, edge, n);
    if (better(p, best)) best = p;
  }
  return best;
}

}  // namespace

OptimizeResult optimize_mu_n(const ExperimentConfig& tmpl, double g2_max, int n_max) {
  if (!(g2_max > 0.0)) throw DomainError("g2_max must be positive");
  if (n_max < 1) throw DomainError("n_max must be >= 1");

  constexpr int kMuPoints = 50;
  constexpr int kBinPoints = 40;
  std::vector<double> mus;
  for (int i = 0; i < kMuPoints; ++i) {
    mus.push_back(kMuLower * std::pow(kMuUpper / kMuLower, static_cast<double>(i) / (kMuPoints - 1)));
  }
  std::vector<int> bins;
  if (n_max <= kBinPoints) {
    for (int n = 1; n <= n_max; ++n) bins.push_back(n);
  } else {
    for (int i = 0; i < kBinPoints; ++i) {
      bins.push_back(1 + static_cast<int>(std::lround(static_cast<double>(i) * (n_max - 1) / (kBinPoints - 1))));
    }
  }

  const auto grid = evaluate_grid(tmpl, mus, bins);
  OptimizeResult res;
  std::optional<std::size_t> best_idx;
  for (std::size_t bi = 0; bi < bins.size(); ++bi) {
    std::optional<TradeoffPoint> col;
    for (std::size_t mi = 0; mi < mus.size(); ++mi) {
      const auto& p = grid[bi * mus.size() + mi];
      if (p.g2 > g2_max) continue;
      if (!col || better(p, *col)) col = p;
      if (!best_idx || better(p, grid[*best_idx])) best_idx = bi * mus.size() + mi;
    }
    if (col) res.frontier.push_back(*col);
  }
  if (!best_idx) return res;

  res.feasible = true;
  res.best = grid[*best_idx];
  // Refine mu between the neighbouring coarse points for the best N and its
  // grid neighbours.
  const std::size_t best_bin = *best_idx / mus.size();
  const std::size_t best_mu = *best_idx % mus.size();
  const double lo = mus[best_mu == 0 ? 0 : best_mu - 1];
  const double hi = mus[std::min(best_mu + 1, mus.size() - 1)];
  for (std::size_t bi = best_bin == 0 ? 0 : best_bin - 1; bi <= std::min(best_bin + 1, bins.size() - 1); ++bi) {
    const int n = bins[bi];
    if (evaluate_point(tmpl, lo, n).g2 > g2_max) continue;
    const double edge = feasible_edge(tmpl, n, lo, hi, g2_max);
    const auto cand = golden_max(tmpl, n, lo, edge);
    if (cand.g2 <= g2_max && better(cand, res.best)) res.best = cand;
  }
  return res;
}

}  // namespace hsps
