#include "hsps/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "hsps/errors.hpp"

namespace hsps {

namespace {

// Composite eta_predelay * eta_shutter_out fitted once to P1 = 0.667 at
// mu = 0.18, N = 40 (exactly-one heralding); frozen for every other scenario.
constexpr const char* kCalibratedBudget = R"(tau_ns = 10
n_bins = 40
rep_rate_hz = 500000
eta_signal_coupling = 0.88
eta_predelay = 0.970745353436381
eta_shutter_out = 1
loop_loss_per_cycle = 0.012
cycle_offset = 0
trigger.cascade_size = 4
trigger.eta_det = 0.62
trigger.eta_idler = 0.84
trigger.policy = exactly_one
meas.eta_meas = 0.426
hom.mu_ref = 0.008
hom.indistinguishability = 0.91
)";

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = {
      {"mu018", std::string("# pump power giving mu = 0.18\nmu = 0.18\n") + kCalibratedBudget},
      {"mu005", std::string("# pump power giving mu = 0.05\nmu = 0.05\n") + kCalibratedBudget},
      {"mu0004", std::string("# pump power giving mu = 0.004\nmu = 0.004\n") + kCalibratedBudget},
      {"improvement", R"(# Illustrative upgrade budget: 5 MHz multiplexing, near-unity trigger
# detectors, lower-loss switch and couplings.
mu = 0.06
tau_ns = 5
n_bins = 40
rep_rate_hz = 5000000
eta_signal_coupling = 0.95
eta_predelay = 0.98
eta_shutter_out = 1
loop_loss_per_cycle = 0.004
cycle_offset = 0
trigger.cascade_size = 4
trigger.eta_det = 0.95
trigger.eta_idler = 0.95
trigger.policy = exactly_one
meas.eta_meas = 0.426
hom.mu_ref = 0.008
hom.indistinguishability = 0.98
)"},
  };
  return table;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(key, "value '" + text + "' for key '" + key + "' is not a number");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(key, "value '" + text + "' for key '" + key + "' is not an integer");
  }
  return v;
}

struct KeySpec {
  std::string key;
  bool numeric;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

#define HSPS_DOUBLE_KEY(name, member)                                                            \
  KeySpec {                                                                                      \
    name, true, [](const RunConfig& c) { return format_double(c.member); },                      \
        [](RunConfig& c, const std::string& v) { c.member = parse_double(name, v); }             \
  }
#define HSPS_INT_KEY(name, member)                                                               \
  KeySpec {                                                                                      \
    name, true, [](const RunConfig& c) { return std::to_string(c.member); },                     \
        [](RunConfig& c, const std::string& v) { c.member = parse_int(name, v); }                \
  }

const std::vector<KeySpec>& registry() {
  static const std::vector<KeySpec> keys = {
      HSPS_DOUBLE_KEY("mu", experiment.mu),
      HSPS_DOUBLE_KEY("tau_ns", experiment.tau_ns),
      HSPS_INT_KEY("n_bins", experiment.n_bins),
      HSPS_DOUBLE_KEY("rep_rate_hz", experiment.rep_rate_hz),
      HSPS_INT_KEY("k_max", experiment.k_max),
      HSPS_DOUBLE_KEY("eta_signal_coupling", experiment.eta_signal_coupling),
      HSPS_DOUBLE_KEY("eta_predelay", experiment.eta_predelay),
      HSPS_DOUBLE_KEY("loop_loss_per_cycle", experiment.loop_loss_per_cycle),
      HSPS_DOUBLE_KEY("eta_shutter_out", experiment.eta_shutter_out),
      HSPS_INT_KEY("cycle_offset", experiment.cycle_offset),
      HSPS_INT_KEY("trigger.cascade_size", experiment.trigger.cascade_size),
      HSPS_DOUBLE_KEY("trigger.eta_det", experiment.trigger.eta_det),
      HSPS_DOUBLE_KEY("trigger.eta_idler", experiment.trigger.eta_idler),
      KeySpec{"trigger.policy", false,
              [](const RunConfig& c) { return std::string(to_string(c.experiment.trigger.policy)); },
              [](RunConfig& c, const std::string& v) {
                try {
                  c.experiment.trigger.policy = parse_herald_policy(v);
                } catch (const DomainError&) {
                  throw ConfigError("trigger.policy",
                                    "value '" + v + "' for key 'trigger.policy' must be any_click or exactly_one");
                }
              }},
      HSPS_DOUBLE_KEY("trigger.dark_count_prob_per_bin", experiment.trigger.dark_count_prob_per_bin),
      HSPS_DOUBLE_KEY("meas.eta_meas", experiment.meas.eta_meas),
      HSPS_DOUBLE_KEY("hom.mu_ref", hom.mu_ref),
      HSPS_DOUBLE_KEY("hom.indistinguishability", hom.indistinguishability),
      HSPS_DOUBLE_KEY("hom.pulse_sigma_ps", hom.pulse_sigma_ps),
      HSPS_DOUBLE_KEY("hom.drift_ps_per_cycle", hom.drift_ps_per_cycle),
      HSPS_DOUBLE_KEY("hom.gvd_ps2_per_cycle", hom.gvd_ps2_per_cycle),
      HSPS_DOUBLE_KEY("hom.delay_min_ps", hom.delay_min_ps),
      HSPS_DOUBLE_KEY("hom.delay_max_ps", hom.delay_max_ps),
      HSPS_INT_KEY("hom.delay_points", hom.delay_points),
      HSPS_DOUBLE_KEY("delay_line.drift_ps_per_hour", drift_ps_per_hour),
  };
  return keys;
}

#undef HSPS_DOUBLE_KEY
#undef HSPS_INT_KEY

const KeySpec& find_key(const std::string& key) {
  for (const auto& k : registry()) {
    if (k.key == key) return k;
  }
  throw ConfigError(key, "unknown config key '" + key + "'");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::validate() const {
  experiment.validate();
  hom.validate();
  if (!(drift_ps_per_hour >= 0.0)) {
    throw ConfigError("delay_line.drift_ps_per_hour", "delay_line.drift_ps_per_hour must be non-negative");
  }
}

DelayLineSpec RunConfig::delay_line() const {
  DelayLineSpec s;
  s.loss_per_cycle = experiment.loop_loss_per_cycle;
  s.cycle_ns = experiment.tau_ns;
  s.gvd_ps2_per_cycle = hom.gvd_ps2_per_cycle;
  s.drift_ps_per_hour = drift_ps_per_hour;
  s.pulse_sigma_ps = hom.pulse_sigma_ps;
  return s;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"mu018", "mu005", "mu0004", "improvement"};
  return names;
}

const std::string& preset_text(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("preset", "unknown preset '" + name + "'");
  return it->second;
}

RunConfig preset(const std::string& name) {
  RunConfig cfg;
  apply_config_text(cfg, preset_text(name), "preset " + name);
  cfg.validate();
  return cfg;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& k : registry()) out.push_back(k.key);
    return out;
  }();
  return keys;
}

bool is_numeric_key(const std::string& key) { return find_key(key).numeric; }

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  find_key(key).set(cfg, trim(value));
}

std::string get_config_value(const RunConfig& cfg, const std::string& key) { return find_key(key).get(cfg); }

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", origin + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError(key, origin + ": duplicate key '" + key + "'");
    set_config_value(cfg, key, line.substr(eq + 1));
  }
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides, const RunConfig& base) {
  RunConfig cfg = base;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "config file '" + path + "' not found or unreadable");
    std::stringstream buf;
    buf << in.rdbuf();
    apply_config_text(cfg, buf.str(), path);
  }
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos) throw ConfigError(ov, "override '" + ov + "' must look like key=value");
    set_config_value(cfg, trim(ov.substr(0, eq)), ov.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

std::string canonical_dump(const RunConfig& cfg) {
  std::string out;
  for (const auto& k : registry()) out += k.key + "=" + k.get(cfg) + "\n";
  return out;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical_dump(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace hsps
