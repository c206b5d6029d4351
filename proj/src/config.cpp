#include "foodland/config.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

#include "foodland/csv.hpp"
#include "foodland/errors.hpp"

namespace foodland {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, const std::string& origin, int line) {
  double out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) fail(origin, line, "expected a number, got '" + v + "'");
  return out;
}

int to_int(const std::string& v, const std::string& origin, int line) {
  int out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) fail(origin, line, "expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& v, const std::string& origin, int line) {
  std::uint64_t out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) {
    fail(origin, line, "expected an unsigned integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& v, const std::string& origin, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(origin, line, "expected 'true' or 'false', got '" + v + "'");
}

struct KeyBinding {
  std::string name;
  std::function<void(RunConfig&, const std::string&, const std::string&, int)> set;
  std::function<std::string(const RunConfig&)> get;
};

KeyBinding bind_double(const char* name, double ModelParams::* field) {
  return {name,
          [field](RunConfig& c, const std::string& v, const std::string& o, int l) {
            c.params.*field = to_double(v, o, l);
          },
          [field](const RunConfig& c) { return format_double_exact(c.params.*field); }};
}

KeyBinding bind_int(const char* name, int ModelParams::* field) {
  return {name,
          [field](RunConfig& c, const std::string& v, const std::string& o, int l) {
            c.params.*field = to_int(v, o, l);
          },
          [field](const RunConfig& c) { return std::to_string(c.params.*field); }};
}

KeyBinding bind_bool(const char* name, bool ModelParams::* field) {
  return {name,
          [field](RunConfig& c, const std::string& v, const std::string& o, int l) {
            c.params.*field = to_bool(v, o, l);
          },
          [field](const RunConfig& c) { return c.params.*field ? "true" : "false"; }};
}

// The full key set. Single-letter and Greek-style names follow the common
// notation for this model family so config files read like the literature
// on food-system land dynamics; everything else is spelled out.
const std::vector<KeyBinding>& registry() {
  static const std::vector<KeyBinding> kBindings = [] {
    std::vector<KeyBinding> b;
    // demand
    b.push_back(bind_double("a", &ModelParams::engel_intercept));
    b.push_back(bind_double("b", &ModelParams::engel_slope));
    b.push_back(bind_double("c", &ModelParams::meat_scale));
    b.push_back(bind_double("d", &ModelParams::meat_elasticity));
    b.push_back(bind_double("r", &ModelParams::kcal_per_meat_unit));
    b.push_back(bind_double("alpha_m", &ModelParams::alpha_meat));
    b.push_back(bind_double("alpha_c", &ModelParams::alpha_crop));
    // production and inputs
    b.push_back(bind_double("k", &ModelParams::chem_exponent));
    b.push_back(bind_double("f", &ModelParams::mech_exponent));
    b.push_back(bind_double("h", &ModelParams::stock_exponent));
    b.push_back(bind_double("lambda_max", &ModelParams::stock_cap_organic));
    b.push_back(bind_double("beta", &ModelParams::mech_rate));
    b.push_back(bind_double("delta", &ModelParams::chem_rate));
    b.push_back(bind_double("gamma", &ModelParams::stock_rate));
    b.push_back(bind_double("nu", &ModelParams::tech_rate));
    b.push_back(bind_double("t_max", &ModelParams::tech_cap));
    b.push_back(bind_double("tech_initial", &ModelParams::tech_initial));
    b.push_back(bind_double("feed_coeff", &ModelParams::feed_coeff));
    // land-use response
    b.push_back(bind_double("phi", &ModelParams::churn_fraction));
    b.push_back(bind_double("zeta_plus_c", &ModelParams::expand_gain_crop));
    b.push_back(bind_double("zeta_plus_m", &ModelParams::expand_gain_pasture));
    b.push_back(bind_double("zeta_minus_c", &ModelParams::contract_gain_crop));
    b.push_back(bind_double("zeta_minus_m", &ModelParams::contract_gain_pasture));
    // cell lifetimes
    b.push_back(bind_double("mu_n", &ModelParams::lifespan_log_sd_natural));
    b.push_back(bind_double("mu_c", &ModelParams::lifespan_log_sd_crop));
    b.push_back(bind_double("mu_m", &ModelParams::lifespan_log_sd_pasture));
    b.push_back(bind_double("sigma_n", &ModelParams::lifespan_median_natural));
    b.push_back(bind_double("sigma_c", &ModelParams::lifespan_median_crop));
    b.push_back(bind_double("sigma_m", &ModelParams::lifespan_median_pasture));
    // landscape and integrity
    b.push_back(bind_double("xi", &ModelParams::correlation_length));
    b.push_back(bind_double("eps_max", &ModelParams::eps_max));
    b.push_back(bind_double("eps_min", &ModelParams::eps_min));
    b.push_back(bind_double("p", &ModelParams::service_exponent));
    b.push_back(bind_double("forest_threshold", &ModelParams::forest_threshold));
    b.push_back(bind_double("degraded_threshold", &ModelParams::degraded_threshold));
    b.push_back(bind_int("grid_width", &ModelParams::grid_width));
    b.push_back(bind_int("grid_height", &ModelParams::grid_height));
    b.push_back(bind_double("share_natural", &ModelParams::share_natural));
    b.push_back(bind_double("share_crop", &ModelParams::share_crop));
    b.push_back(bind_double("share_pasture", &ModelParams::share_pasture));
    // timeline
    b.push_back(bind_int("start_year", &ModelParams::start_year));
    b.push_back(bind_int("policy_year", &ModelParams::policy_year));
    b.push_back(bind_int("end_year", &ModelParams::end_year));
    // behavior switches
    b.push_back({"natural_sign",
                 [](RunConfig& c, const std::string& v, const std::string& o, int l) {
                   if (v == "growth") {
                     c.params.natural_sign = NaturalSign::growth;
                   } else if (v == "literal") {
                     c.params.natural_sign = NaturalSign::literal;
                   } else {
                     fail(o, l, "natural_sign must be 'growth' or 'literal'");
                   }
                 },
                 [](const RunConfig& c) {
                   return std::string(c.params.natural_sign == NaturalSign::growth ? "growth"
                                                                                   : "literal");
                 }});
    b.push_back({"land_floor_mode",
                 [](RunConfig& c, const std::string& v, const std::string& o, int l) {
                   if (v == "quantum") {
                     c.params.land_floor_mode = LandFloorMode::quantum;
                   } else if (v == "scaled") {
                     c.params.land_floor_mode = LandFloorMode::scaled;
                   } else {
                     fail(o, l, "land_floor_mode must be 'quantum' or 'scaled'");
                   }
                 },
                 [](const RunConfig& c) {
                   return std::string(c.params.land_floor_mode == LandFloorMode::quantum
                                          ? "quantum"
                                          : "scaled");
                 }});
    b.push_back(bind_bool("symmetric_demand_feedback", &ModelParams::symmetric_demand_feedback));
    b.push_back(bind_bool("organic_lambda_cap", &ModelParams::organic_lambda_cap));
    b.push_back(bind_bool("organic_crop_phi_exempt", &ModelParams::organic_crop_phi_exempt));
    // run settings
    b.push_back({"n_runs",
                 [](RunConfig& c, const std::string& v, const std::string& o, int l) {
                   c.n_runs = to_int(v, o, l);
                 },
                 [](const RunConfig& c) { return std::to_string(c.n_runs); }});
    b.push_back({"master_seed",
                 [](RunConfig& c, const std::string& v, const std::string& o, int l) {
                   c.master_seed = to_u64(v, o, l);
                 },
                 [](const RunConfig& c) { return std::to_string(c.master_seed); }});
    b.push_back({"n_threads",
                 [](RunConfig& c, const std::string& v, const std::string& o, int l) {
                   c.n_threads = to_int(v, o, l);
                 },
                 [](const RunConfig& c) { return std::to_string(c.n_threads); }});
    b.push_back({"out_dir",
                 [](RunConfig& c, const std::string& v, const std::string& o, int l) {
                   if (v.empty()) fail(o, l, "out_dir must not be empty");
                   c.out_dir = v;
                 },
                 [](const RunConfig& c) { return c.out_dir; }});
    b.push_back({"drivers",
                 [](RunConfig& c, const std::string& v, const std::string& o, int l) {
                   if (v.empty()) fail(o, l, "drivers must be 'builtin' or a CSV path");
                   c.drivers = v;
                 },
                 [](const RunConfig& c) { return c.drivers; }});
    b.push_back({"keep_going",
                 [](RunConfig& c, const std::string& v, const std::string& o, int l) {
                   c.keep_going = to_bool(v, o, l);
                 },
                 [](const RunConfig& c) { return c.keep_going ? "true" : "false"; }});
    b.push_back({"snapshot_years",
                 [](RunConfig& c, const std::string& v, const std::string& o, int l) {
                   c.snapshot_years.clear();
                   std::size_t pos = 0;
                   while (pos < v.size()) {
                     std::size_t comma = v.find(',', pos);
                     if (comma == std::string::npos) comma = v.size();
                     const std::string item = trim(v.substr(pos, comma - pos));
                     if (!item.empty()) c.snapshot_years.push_back(to_int(item, o, l));
                     pos = comma + 1;
                   }
                 },
                 [](const RunConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.snapshot_years.size(); ++i) {
                     if (i) out.push_back(',');
                     out += std::to_string(c.snapshot_years[i]);
                   }
                   return out;
                 }});
    std::sort(b.begin(), b.end(),
              [](const KeyBinding& x, const KeyBinding& y) { return x.name < y.name; });
    return b;
  }();
  return kBindings;
}

const KeyBinding* find_binding(const std::string& key) {
  const auto& reg = registry();
  auto it = std::lower_bound(reg.begin(), reg.end(), key,
                             [](const KeyBinding& b, const std::string& k) { return b.name < k; });
  if (it != reg.end() && it->name == key) return &*it;
  return nullptr;
}

// Splits "key = value" (either side may carry surrounding spaces); returns
// false for blank/comment lines.
bool split_line(const std::string& raw, std::string& key, std::string& value,
                const std::string& origin, int line) {
  const std::string s = trim(raw);
  if (s.empty() || s[0] == '#') return false;
  const std::size_t eq = s.find('=');
  if (eq == std::string::npos) fail(origin, line, "expected 'key = value', got '" + s + "'");
  key = trim(s.substr(0, eq));
  value = trim(s.substr(eq + 1));
  if (key.empty()) fail(origin, line, "missing key before '='");
  return true;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  out.reserve(registry().size());
  for (const KeyBinding& b : registry()) out.push_back(b.name);
  return out;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  int line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line;
    std::string key, value;
    if (!split_line(raw, key, value, origin, line)) continue;
    const KeyBinding* binding = find_binding(key);
    if (!binding) fail(origin, line, "unknown key '" + key + "'");
    if (cfg.was_set(key)) fail(origin, line, "duplicate key '" + key + "'");
    binding->set(cfg, value, origin, line);
    cfg.overridden.insert(key);
  }
  cfg.params.validate();
  if (cfg.n_runs <= 0) throw ConfigError(origin + ": n_runs must be positive");
  if (cfg.n_threads < 0) throw ConfigError(origin + ": n_threads must be >= 0");
  for (int y : cfg.snapshot_years) {
    if (y < cfg.params.start_year || y > cfg.params.end_year) {
      throw ConfigError(origin + ": snapshot year " + std::to_string(y) +
                        " outside the timeline");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config_text(read_text_file(path), path);
}

std::string config_to_text(const RunConfig& cfg) {
  std::string out;
  for (const KeyBinding& b : registry()) {
    out += b.name;
    out += " = ";
    out += b.get(cfg);
    out.push_back('\n');
  }
  return out;
}

Portfolio parse_scenario_text(const std::string& text, const std::string& origin) {
  static const std::string kPrefix = "policies.";
  std::vector<PolicySpec> specs;
  int line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line;
    std::string key, value;
    if (!split_line(raw, key, value, origin, line)) continue;
    if (key.rfind(kPrefix, 0) != 0) {
      fail(origin, line, "expected 'policies.<kind> = <magnitude>', got key '" + key + "'");
    }
    PolicySpec spec;
    try {
      spec.kind = parse_policy_kind(key.substr(kPrefix.size()));
    } catch (const ConfigError& e) {
      fail(origin, line, e.what());
    }
    spec.magnitude = to_double(value, origin, line);
    if (!(spec.magnitude >= 0.0 && spec.magnitude <= 1.0)) {
      fail(origin, line, "policy magnitude must be in [0, 1]");
    }
    specs.push_back(spec);
  }
  try {
    return Portfolio(std::move(specs));
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

Portfolio load_scenario(const std::string& path) {
  return parse_scenario_text(read_text_file(path), path);
}

std::string scenario_to_text(const Portfolio& portfolio) {
  std::string out;
  for (const PolicySpec& s : portfolio.specs()) {
    out += "policies.";
    out += policy_kind_name(s.kind);
    out += " = ";
    out += format_double_exact(s.magnitude);
    out.push_back('\n');
  }
  return out;
}

}  // namespace foodland
