#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hsps/mux_engine.hpp"

namespace hsps {

/// One row of the single-photon-source comparison table.
struct SourceFigures {
  std::string label;
  std::string method;
  double r_hz = 0.0;
  double p_1 = 0.0;
  double g2 = 0.0;
  double indistinguishability = 0.0;
  /// Rates quoted alongside the figures, keyed by fold count (may be empty).
  std::vector<std::pair<int, double>> quoted_rates;
};

/// C_M = p_1^m * r_hz.
double coincidence_rate(double p_1, double r_hz, int m);

struct ComparisonRow {
  SourceFigures source;
  std::vector<double> rates;  ///< one per requested fold, same order
};

struct ComparisonTable {
  std::vector<int> folds;
  std::vector<ComparisonRow> rows;
};

ComparisonTable build_comparison_table(const std::vector<SourceFigures>& rows, const std::vector<int>& folds);

/// Reads source rows from CSV with header
/// `label,method,r_hz,p_1,g2,indistinguishability,c10_quoted,c30_quoted`
/// (quoted columns may be empty). Throws IoError / ConfigError.
std::vector<SourceFigures> load_source_rows(const std::string& path);

/// Figures of a configured source taken from the analytic engine.
SourceFigures figures_from_config(const ExperimentConfig& cfg, double indistinguishability, std::string label);

/// Analytic P1 and herald-conditioned g2 estimate at one (mu, N) point.
struct TradeoffPoint {
  double mu = 0.0;
  int n_bins = 0;
  double p_1 = 0.0;
  double g2 = 0.0;
};

TradeoffPoint evaluate_point(const ExperimentConfig& tmpl, double mu, int n_bins);

struct OptimizeResult {
  bool feasible = false;
  TradeoffPoint best;
  /// Best feasible coarse-grid point for every N on the grid (N without any
  /// feasible mu are omitted).
  std::vector<TradeoffPoint> frontier;
};

inline constexpr double kMuLower = 1e-4;
inline constexpr double kMuUpper = 1.0;

/// Coarse (mu, N) grid evaluated in parallel, serial reduction.
std::vector<TradeoffPoint> evaluate_grid(const ExperimentConfig& tmpl, const std::vector<double>& mus,
                                         const std::vector<int>& bins);
/// Serial reference for `evaluate_grid`.
std::vector<TradeoffPoint> evaluate_grid_serial(const ExperimentConfig& tmpl, const std::vector<double>& mus,
                                                const std::vector<int>& bins);

/// Maximizes analytic P1 over mu in [1e-4, 1] and N in [1, n_max] subject to
/// g2 <= g2_max: coarse 50 x 40 grid, then golden-section refinement in mu
/// around the best grid point. Ties go to the smaller mu.
OptimizeResult optimize_mu_n(const ExperimentConfig& tmpl, double g2_max, int n_max);

}  // namespace hsps
