// Command-line front end: simulate, sweep, hom, table, optimize, report.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hsps/config.hpp"
#include "hsps/errors.hpp"
#include "hsps/interference.hpp"
#include "hsps/predictor.hpp"
#include "hsps/results.hpp"
#include "hsps/temporal_checks.hpp"
#include "hsps/version.hpp"

#ifndef HSPS_DATA_DIR
#define HSPS_DATA_DIR "data"
#endif

namespace {

using namespace hsps;

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

struct CommonOptions {
  std::string config_path;
  std::string preset_name;
  std::vector<std::string> overrides;
  std::uint64_t seed = 20180101;
  std::uint64_t trials = 1000000;
  std::string format = "json";
  std::string output = "-";
  bool analytic = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool monte_carlo) {
  cmd->add_option("-c,--config", o.config_path, "flat key = value config file");
  cmd->add_option("-p,--preset", o.preset_name, "start from a preset: mu018, mu005, mu0004, improvement");
  cmd->add_option("-s,--set", o.overrides, "override key=value (repeatable)");
  cmd->add_option("-f,--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("-o,--output", o.output, "output path, - for stdout");
  if (monte_carlo) {
    cmd->add_option("--seed", o.seed, "Monte Carlo seed");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    cmd->add_flag("--analytic", o.analytic, "use the exact enumeration instead of Monte Carlo");
  }
}

RunConfig resolve(const CommonOptions& o) {
  const RunConfig base = o.preset_name.empty() ? RunConfig{} : preset(o.preset_name);
  return load_config(o.config_path, o.overrides, base);
}

RunMeta meta_for(const std::string& command, const RunConfig& cfg, const CommonOptions& o, bool monte_carlo) {
  RunMeta m;
  m.command = command;
  m.config_hash = config_hash(cfg);
  m.seed = monte_carlo && !o.analytic ? o.seed : 0;
  m.trials = monte_carlo && !o.analytic ? o.trials : 0;
  m.version = kEngineVersion;
  return m;
}

std::vector<double> parse_values(const std::string& list, const std::string& range) {
  std::vector<double> out;
  if (!range.empty()) {
    double a = 0, b = 0, step = 1;
    char c1 = 0, c2 = 0;
    std::istringstream in(range);
    if (!(in >> a >> c1 >> b) || c1 != ':') throw ConfigError("range", "range must be start:stop[:step]");
    if (in >> c2 >> step && c2 != ':') throw ConfigError("range", "range must be start:stop[:step]");
    if (!(step > 0) || b < a) throw ConfigError("range", "range needs start <= stop and a positive step");
    for (double v = a; v <= b + 1e-9 * step; v += step) out.push_back(v);
  }
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("values", "sweep value '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw ConfigError("values", "sweep needs --values or --range");
  return out;
}

Cell opt(const std::optional<double>& v) { return v ? Cell{*v} : Cell{std::monostate{}}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-multiplexed heralded single-photon source simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kEngineVersion);

  CommonOptions sim_o, sweep_o, hom_o, table_o, opt_o, report_o;

  auto* sim = app.add_subcommand("simulate", "figures of merit for one configuration");
  add_common(sim, sim_o, true);

  auto* sweep = app.add_subcommand("sweep", "figures of merit along one parameter axis");
  add_common(sweep, sweep_o, true);
  std::string axis, values, range;
  sweep->add_option("--axis", axis, "numeric config key to sweep")->required();
  sweep->add_option("--values", values, "comma-separated values");
  sweep->add_option("--range", range, "start:stop[:step]");

  auto* hom = app.add_subcommand("hom", "Hong-Ou-Mandel scan against the reference source");
  add_common(hom, hom_o, false);

  auto* table = app.add_subcommand("table", "M-fold coincidence-rate comparison table");
  add_common(table, table_o, false);
  std::string rows_path = std::string(HSPS_DATA_DIR) + "/source_comparison.csv";
  std::vector<int> folds = {10, 30};
  table->add_option("--rows", rows_path, "static comparison rows (CSV)");
  table->add_option("--folds", folds, "fold counts M")->delimiter(',');

  auto* optimize = app.add_subcommand("optimize", "maximize P1 over (mu, N) under a g2 bound");
  add_common(optimize, opt_o, false);
  double g2_max = 0.09;
  int n_max = 40;
  optimize->add_option("--g2-max", g2_max, "upper bound on the estimated g2")->required();
  optimize->add_option("--n-max", n_max, "largest number of bins");

  auto* report = app.add_subcommand("report", "delay-line health report and calibration summary");
  add_common(report, report_o, false);
  double hours = 1.0;
  report->add_option("--hours", hours, "elapsed time for the drift figure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sim) {
      const auto cfg = resolve(sim_o);
      const SimResult r = sim_o.analytic ? analyze(cfg.experiment)
                                         : simulate_trials(cfg.experiment, sim_o.trials, sim_o.seed);
      const auto t = sweep_table({make_row("n_bins", cfg.experiment.n_bins, r)});
      emit_results(t, meta_for("simulate", cfg, sim_o, true), parse_output_format(sim_o.format), sim_o.output);
    } else if (*sweep) {
      const auto cfg = resolve(sweep_o);
      const auto rows = run_sweep(cfg, axis, parse_values(values, range), sweep_o.seed, sweep_o.trials,
                                  sweep_o.analytic ? Engine::Analytic : Engine::MonteCarlo);
      emit_results(sweep_table(rows), meta_for("sweep", cfg, sweep_o, true), parse_output_format(sweep_o.format),
                   sweep_o.output);
    } else if (*hom) {
      const auto cfg = resolve(hom_o);
      const auto res = hom_scan(make_hom_config(cfg.experiment, cfg.hom));
      ResultTable t;
      t.columns = {"delay_ps", "coincidence", "accidental", "coincidence_sub"};
      for (std::size_t i = 0; i < res.delays_ps.size(); ++i) {
        t.rows.push_back({res.delays_ps[i], res.coincidences[i], res.accidentals[i],
                          accidental_subtract(res.coincidences[i], res.accidentals[i])});
      }
      t.summary = {{"mu", cfg.experiment.mu}, {"v_raw", opt(res.v_raw)}, {"v_sub", opt(res.v_sub)},
                   {"c_far", res.c_far}};
      emit_results(t, meta_for("hom", cfg, hom_o, false), parse_output_format(hom_o.format), hom_o.output);
    } else if (*table) {
      const auto cfg = resolve(table_o.preset_name.empty() && table_o.config_path.empty()
                                   ? CommonOptions{.preset_name = "mu018", .overrides = table_o.overrides}
                                   : table_o);
      auto sources = load_source_rows(rows_path);
      // live row goes just before the upgrade projection, if the file has one
      auto at = std::find_if(sources.begin(), sources.end(),
                             [](const SourceFigures& f) { return f.label == "mux_hsps_upgrade"; });
      sources.insert(at, figures_from_config(cfg.experiment, cfg.hom.indistinguishability, "mux_hsps_simulated"));
      const auto tab = build_comparison_table(sources, folds);
      ResultTable t;
      t.columns = {"label", "method", "r_hz", "p_1", "g2", "indistinguishability"};
      for (int m : folds) t.columns.push_back("c_" + std::to_string(m));
      for (int m : folds) t.columns.push_back("c_" + std::to_string(m) + "_quoted");
      for (const auto& row : tab.rows) {
        std::vector<Cell> cells = {row.source.label, row.source.method, row.source.r_hz, row.source.p_1,
                                   row.source.g2, row.source.indistinguishability};
        for (double rate : row.rates) cells.emplace_back(rate);
        for (int m : folds) {
          Cell quoted = std::monostate{};
          for (const auto& [fold, rate] : row.source.quoted_rates) {
            if (fold == m) quoted = rate;
          }
          cells.push_back(quoted);
        }
        t.rows.push_back(std::move(cells));
      }
      emit_results(t, meta_for("table", cfg, table_o, false), parse_output_format(table_o.format), table_o.output);
    } else if (*optimize) {
      const auto cfg = resolve(opt_o);
      const auto res = optimize_mu_n(cfg.experiment, g2_max, n_max);
      if (!res.feasible) {
        std::cerr << "infeasible: no (mu, N) with mu in [1e-4, 1] reaches g2 <= " << g2_max << "\n";
        return kExitInfeasible;
      }
      ResultTable t;
      t.columns = {"n_bins", "mu", "p_1", "g2"};
      for (const auto& p : res.frontier) {
        t.rows.push_back({static_cast<std::int64_t>(p.n_bins), p.mu, p.p_1, p.g2});
      }
      t.summary = {{"best_mu", res.best.mu},
                   {"best_n_bins", static_cast<std::int64_t>(res.best.n_bins)},
                   {"best_p_1", res.best.p_1},
                   {"best_g2", res.best.g2},
                   {"g2_max", g2_max}};
      emit_results(t, meta_for("optimize", cfg, opt_o, false), parse_output_format(opt_o.format), opt_o.output);
    } else if (*report) {
      const auto cfg = resolve(report_o);
      const auto spec = cfg.delay_line();
      const double drift = spec.drift_ps_per_hour * hours;
      ResultTable t;
      t.columns = {"convention", "sigma_ps", "cycles", "lifetime_cycles", "lifetime_ns", "survival",
                   "broadened_sigma_ps", "broadening_rel", "drift_ps", "overlap"};
      for (auto conv : {DurationConvention::Fwhm, DurationConvention::Sigma}) {
        const auto r = build_health_report(spec, cfg.experiment.n_bins, drift, conv);
        t.rows.push_back({std::string(conv == DurationConvention::Fwhm ? "fwhm" : "sigma"), r.sigma_ps,
                          static_cast<std::int64_t>(r.cycles),
                          r.lifetime_cycles ? Cell{static_cast<std::int64_t>(*r.lifetime_cycles)} : Cell{},
                          r.lifetime_ns, r.survival, r.broadened_sigma_ps, r.broadening_rel, r.drift_ps, r.overlap});
      }
      const auto a = analyze(cfg.experiment);
      t.summary = {{"composite_efficiency", cfg.experiment.eta_predelay * cfg.experiment.eta_shutter_out},
                   {"p_h", a.p_h},
                   {"p_1", a.p_1},
                   {"g2_est", opt(a.g2_est)}};
      emit_results(t, meta_for("report", cfg, report_o, false), parse_output_format(report_o.format),
                   report_o.output);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
