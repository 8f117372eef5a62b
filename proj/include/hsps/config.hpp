#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hsps/interference.hpp"
#include "hsps/mux_engine.hpp"
#include "hsps/temporal_checks.hpp"

namespace hsps {

/// Everything a run needs: source budget, HOM reference settings and the
/// delay-line drift figure. Loaded from a flat `key = value` file with dotted
/// namespaces (trigger.eta_det, hom.mu_ref, ...).
struct RunConfig {
  ExperimentConfig experiment;
  HomSettings hom;
  double drift_ps_per_hour = 0.01;

  void validate() const;
  DelayLineSpec delay_line() const;
};

/// Names accepted by `preset`: mu018, mu005, mu0004, improvement.
const std::vector<std::string>& preset_names();
RunConfig preset(const std::string& name);
/// Source text of a preset in the config-file format.
const std::string& preset_text(const std::string& name);

/// Every config key in canonical order.
const std::vector<std::string>& config_keys();
bool is_numeric_key(const std::string& key);

/// Sets one key from its text form. Throws ConfigError for unknown keys or
/// unparsable values; range checks happen in `validate`.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
std::string get_config_value(const RunConfig& cfg, const std::string& key);

/// Applies `key = value` lines ('#' starts a comment). Duplicate keys are an error.
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin);

/// Reads `path` on top of `base`, then applies `key=value` overrides, then
/// validates. `path` may be empty (overrides only).
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides,
                      const RunConfig& base = RunConfig{});

/// Canonical `key=value` listing of every effective parameter.
std::string canonical_dump(const RunConfig& cfg);
/// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace hsps
