#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "foodland/config.hpp"
#include "foodland/csv.hpp"
#include "foodland/drivers.hpp"
#include "foodland/engine.hpp"
#include "foodland/errors.hpp"
#include "foodland/fit.hpp"
#include "foodland/scenario.hpp"

namespace {

using namespace foodland;

struct CommonOpts {
  std::string config_path;
  std::string drivers;
  std::string out_dir;
  int runs = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = -1;
  bool keep_going = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "config file (key = value lines)");
  cmd->add_option("--drivers", o.drivers, "'builtin' or a driver CSV path");
  cmd->add_option("--runs", o.runs, "ensemble size");
  cmd->add_option("--seed", o.seed, "master seed")->each([&](const std::string&) {
    o.seed_set = true;
  });
  cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_flag("--keep-going", o.keep_going, "skip failed runs instead of aborting");
}

RunConfig make_config(const CommonOpts& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (!o.drivers.empty()) cfg.drivers = o.drivers;
  if (o.runs >= 0) cfg.n_runs = o.runs;
  if (o.seed_set) cfg.master_seed = o.seed;
  if (o.threads >= 0) cfg.n_threads = o.threads;
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.keep_going) cfg.keep_going = true;
  if (cfg.n_runs <= 0) throw ConfigError("--runs must be positive");
  return cfg;
}

// The builtin driver bundle expresses income in its own units, which pairs
// with a matching meat-demand scale; an explicit config value wins.
Drivers resolve_drivers(RunConfig& cfg) {
  if (cfg.drivers == "builtin") {
    if (!cfg.was_set("c")) cfg.params.meat_scale = kBuiltinMeatScale;
    return Drivers::builtin(cfg.params.start_year, cfg.params.end_year);
  }
  return Drivers::load_csv(cfg.drivers).extended_to(cfg.params.end_year);
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());
  return dir;
}

void write_config_used(const std::filesystem::path& dir, const RunConfig& cfg) {
  write_text_file((dir / "config_used.txt").string(), config_to_text(cfg));
}

// Wide per-run table: year column plus every recorded variable.
std::string run_csv(const RunRecord& rec) {
  std::string out = "year";
  for (const char* name : kColumnNames) {
    out.push_back(',');
    out += name;
  }
  out.push_back('\n');
  for (const YearRow& row : rec.rows) {
    out += std::to_string(row.year);
    for (double v : row.v) {
      out.push_back(',');
      out += format_double(v);
    }
    out.push_back('\n');
  }
  return out;
}

void print_ensemble_summary(const EnsembleResult& ens, int end_year) {
  std::printf("runs: %d ok, %d failed\n", ens.n_defined[0][cols::area_forest],
              (int)ens.failed.size());
  std::printf("year %d: forest %s +- %s, degraded %s +- %s, natural %s +- %s\n", end_year,
              format_double(ens.mean_at(end_year, cols::area_forest)).c_str(),
              format_double(ens.stderr_at(end_year, cols::area_forest)).c_str(),
              format_double(ens.mean_at(end_year, cols::area_degraded)).c_str(),
              format_double(ens.stderr_at(end_year, cols::area_degraded)).c_str(),
              format_double(ens.mean_at(end_year, cols::area_natural)).c_str(),
              format_double(ens.stderr_at(end_year, cols::area_natural)).c_str());
}

void write_snapshots(const std::filesystem::path& dir, const RunConfig& cfg,
                     const Drivers& drivers) {
  if (cfg.snapshot_years.empty()) return;
  const std::uint64_t seed = derive_seeds(cfg.master_seed, 1)[0];
  const RunOutput out = run_single_with_snapshots(cfg.params, drivers, seed, cfg.snapshot_years);
  for (const auto& [year, cells] : out.snapshots) {
    const std::string name = "snapshot_" + std::to_string(year) + ".csv";
    write_text_file((dir / name).string(), snapshot_csv(cells));
    std::printf("wrote %s\n", (dir / name).string().c_str());
  }
}

int cmd_run(const CommonOpts& o) {
  RunConfig cfg = make_config(o);
  const Drivers drivers = resolve_drivers(cfg);
  const EnsembleResult ens =
      run_ensemble(cfg.params, drivers, cfg.n_runs, cfg.master_seed, cfg.n_threads,
                   cfg.keep_going, /*keep_runs=*/false);
  const auto dir = prepare_out_dir(cfg);
  write_text_file((dir / "timeseries.csv").string(), timeseries_csv(ens));
  write_config_used(dir, cfg);
  write_snapshots(dir, cfg, drivers);
  print_ensemble_summary(ens, cfg.params.end_year);
  std::printf("wrote %s\n", (dir / "timeseries.csv").string().c_str());
  return 0;
}

int cmd_scenario(const CommonOpts& o, const std::string& scenario_path) {
  RunConfig cfg = make_config(o);
  const Drivers drivers = resolve_drivers(cfg);
  const Portfolio portfolio = load_scenario(scenario_path);
  const EnsembleResult baseline =
      run_ensemble(cfg.params, drivers, cfg.n_runs, cfg.master_seed, cfg.n_threads,
                   /*keep_going=*/false, /*keep_runs=*/false);
  const ModelParams scenario_params = apply_portfolio(cfg.params, portfolio);
  const EnsembleResult scenario =
      run_ensemble(scenario_params, drivers, cfg.n_runs, cfg.master_seed, cfg.n_threads,
                   /*keep_going=*/false, /*keep_runs=*/false);
  const ScenarioOutcome oc =
      compare_to_baseline(baseline, scenario, portfolio, cfg.params.end_year);

  const auto dir = prepare_out_dir(cfg);
  write_text_file((dir / "timeseries_baseline.csv").string(), timeseries_csv(baseline));
  write_text_file((dir / "timeseries_scenario.csv").string(), timeseries_csv(scenario));
  write_config_used(dir, cfg);

  std::string summary = "portfolio_id,label,delta_forest_pct,delta_degraded_pct\n";
  summary += std::to_string(portfolio.id());
  summary.push_back(',');
  summary += portfolio.label();
  summary.push_back(',');
  summary += format_double(oc.delta_forest_pct ? *oc.delta_forest_pct : std::nan(""));
  summary.push_back(',');
  summary += format_double(oc.delta_degraded_pct ? *oc.delta_degraded_pct : std::nan(""));
  summary.push_back('\n');
  write_text_file((dir / "scenario_summary.csv").string(), summary);

  std::printf("portfolio %s (id %u)\n", portfolio.label().c_str(), portfolio.id());
  std::printf("delta forest: %s%%, delta degraded: %s%%\n",
              format_double(oc.delta_forest_pct ? *oc.delta_forest_pct : std::nan("")).c_str(),
              format_double(oc.delta_degraded_pct ? *oc.delta_degraded_pct : std::nan(""))
                  .c_str());
  return 0;
}

std::vector<double> parse_grid_spec(const std::string& spec) {
  double lo = 0, hi = 0, step = 0;
  const auto first = spec.find(':');
  const auto second = first == std::string::npos ? std::string::npos : spec.find(':', first + 1);
  if (first == std::string::npos || second == std::string::npos) {
    throw ConfigError("--grid expects lo:hi:step, got '" + spec + "'");
  }
  try {
    lo = std::stod(spec.substr(0, first));
    hi = std::stod(spec.substr(first + 1, second - first - 1));
    step = std::stod(spec.substr(second + 1));
  } catch (const std::exception&) {
    throw ConfigError("--grid expects numbers lo:hi:step, got '" + spec + "'");
  }
  return make_grid(lo, hi, step);
}

int cmd_sweep(const CommonOpts& o, const std::string& grid_spec, const std::string& base_path) {
  RunConfig cfg = make_config(o);
  const Drivers drivers = resolve_drivers(cfg);
  const Portfolio base = base_path.empty() ? Portfolio{} : load_scenario(base_path);
  const std::vector<double> grid = parse_grid_spec(grid_spec);
  const SweepResult res = demand_sweep(cfg.params, drivers, base, grid, cfg.n_runs,
                                       cfg.master_seed, cfg.n_threads);
  const auto dir = prepare_out_dir(cfg);
  write_text_file((dir / "sweep.csv").string(), sweep_csv(res));
  write_config_used(dir, cfg);
  if (res.rho_star) {
    std::printf("rho_star = %s\n", format_double(*res.rho_star).c_str());
  } else {
    std::printf("rho_star = none (no grid point improves both outcomes)\n");
  }
  std::printf("wrote %s\n", (dir / "sweep.csv").string().c_str());
  return 0;
}

std::vector<PolicySpec> default_pool() {
  std::vector<PolicySpec> pool;
  for (int i = 0; i < kPolicyKindCount; ++i) {
    const auto kind = static_cast<PolicyKind>(i);
    // restrictions are on/off bans; the graded instruments start at 10%
    const double magnitude = (kind == PolicyKind::deforestation_restriction_crop ||
                              kind == PolicyKind::deforestation_restriction_meat)
                                 ? 1.0
                                 : 0.10;
    pool.push_back({kind, magnitude});
  }
  return pool;
}

int cmd_portfolio(const CommonOpts& o, const std::string& pool_path, int top_k) {
  RunConfig cfg = make_config(o);
  const Drivers drivers = resolve_drivers(cfg);
  const std::vector<PolicySpec> pool =
      pool_path.empty() ? default_pool() : load_scenario(pool_path).specs();
  const EnumerationResult res = enumerate_and_rank(cfg.params, drivers, pool, top_k, cfg.n_runs,
                                                   cfg.master_seed, cfg.n_threads);
  const auto dir = prepare_out_dir(cfg);
  write_text_file((dir / "scenarios.csv").string(), scenarios_csv(res));
  write_text_file((dir / "portfolio_legend.csv").string(), portfolio_legend_csv(res));
  write_config_used(dir, cfg);

  std::printf("%zu portfolios evaluated\n", res.portfolios.size());
  std::printf("top %d by forest gain:\n", top_k);
  for (const RankedPortfolio& rp : res.portfolios) {
    if (rp.rank_forest > 0 && rp.rank_forest <= top_k) {
      std::printf("  %2d. id %3u %s (forest %s%%, degraded %s%%)\n", rp.rank_forest,
                  rp.portfolio.id(), rp.portfolio.label().c_str(),
                  format_double(rp.delta_forest_pct ? *rp.delta_forest_pct : std::nan(""))
                      .c_str(),
                  format_double(rp.delta_degraded_pct ? *rp.delta_degraded_pct : std::nan(""))
                      .c_str());
    }
  }
  std::printf("portfolios in both top lists: %zu\n", res.in_both.size());
  std::printf("wrote %s and %s\n", (dir / "scenarios.csv").string().c_str(),
              (dir / "portfolio_legend.csv").string().c_str());
  return 0;
}

int cmd_fit(const std::string& data_path, const std::string& out_config) {
  const CsvDoc doc = read_csv(data_path);
  const std::vector<std::string> expect = {"income_per_capita", "calories_per_capita",
                                           "meat_per_capita"};
  if (doc.header != expect) {
    throw ConfigError(data_path +
                      ": expected header income_per_capita,calories_per_capita,meat_per_capita");
  }
  std::vector<double> incomes, calories, meat;
  for (std::size_t i = 0; i < doc.rows.size(); ++i) {
    const std::string where = data_path + " line " + std::to_string(i + 2);
    incomes.push_back(parse_double_field(doc.rows[i][0], where));
    calories.push_back(parse_double_field(doc.rows[i][1], where));
    meat.push_back(parse_double_field(doc.rows[i][2], where));
  }
  const DemandFit fit = fit_demand_params(incomes, calories, meat);
  std::printf("a = %s\n", format_double_exact(fit.engel_intercept).c_str());
  std::printf("b = %s\n", format_double_exact(fit.engel_slope).c_str());
  std::printf("c = %s\n", format_double_exact(fit.meat_scale).c_str());
  std::printf("d = %s\n", format_double_exact(fit.meat_elasticity).c_str());
  std::printf("rss_calories = %s\n", format_double(fit.rss_calories).c_str());
  std::printf("rss_log_meat = %s\n", format_double(fit.rss_log_meat).c_str());
  if (!out_config.empty()) {
    std::string text;
    text += "a = " + format_double_exact(fit.engel_intercept) + "\n";
    text += "b = " + format_double_exact(fit.engel_slope) + "\n";
    text += "c = " + format_double_exact(fit.meat_scale) + "\n";
    text += "d = " + format_double_exact(fit.meat_elasticity) + "\n";
    write_text_file(out_config, text);
    std::printf("wrote %s\n", out_config.c_str());
  }
  return 0;
}

int cmd_snapshot(const CommonOpts& o, const std::string& years_spec) {
  RunConfig cfg = make_config(o);
  if (!years_spec.empty()) {
    cfg.snapshot_years.clear();
    std::size_t pos = 0;
    while (pos <= years_spec.size()) {
      std::size_t comma = years_spec.find(',', pos);
      if (comma == std::string::npos) comma = years_spec.size();
      const std::string item = years_spec.substr(pos, comma - pos);
      if (!item.empty()) {
        try {
          cfg.snapshot_years.push_back(std::stoi(item));
        } catch (const std::exception&) {
          throw ConfigError("--years expects comma-separated years, got '" + years_spec + "'");
        }
      }
      pos = comma + 1;
    }
  }
  if (cfg.snapshot_years.empty()) {
    throw ConfigError("snapshot needs --years or snapshot_years in the config");
  }
  const Drivers drivers = resolve_drivers(cfg);
  const auto dir = prepare_out_dir(cfg);
  const std::uint64_t seed = derive_seeds(cfg.master_seed, 1)[0];
  const RunOutput out = run_single_with_snapshots(cfg.params, drivers, seed, cfg.snapshot_years);
  write_text_file((dir / "run.csv").string(), run_csv(out.record));
  for (const auto& [year, cells] : out.snapshots) {
    const std::string name = "snapshot_" + std::to_string(year) + ".csv";
    write_text_file((dir / name).string(), snapshot_csv(cells));
    std::printf("wrote %s\n", (dir / name).string().c_str());
  }
  write_config_used(dir, cfg);
  std::printf("wrote %s\n", (dir / "run.csv").string().c_str());
  return 0;
}

void check_columns(const CsvDoc& doc, const std::vector<std::string>& expect,
                   const std::string& path) {
  if (doc.header != expect) {
    std::string want;
    for (std::size_t i = 0; i < expect.size(); ++i) {
      if (i) want.push_back(',');
      want += expect[i];
    }
    throw ConfigError(path + ": expected header '" + want + "'");
  }
}

std::string field_context(const std::string& path, std::size_t row) {
  return path + " line " + std::to_string(row + 2);
}

double num_field(const CsvDoc& doc, std::size_t row, std::size_t col, const std::string& path) {
  return parse_double_field(doc.rows[row][col], field_context(path, row));
}

long long int_field(const CsvDoc& doc, std::size_t row, std::size_t col,
                    const std::string& path) {
  return parse_int_field(doc.rows[row][col], field_context(path, row));
}

int cmd_validate(const std::string& kind, const std::string& path) {
  if (kind == "config") {
    (void)load_config(path);
  } else if (kind == "scenario") {
    (void)load_scenario(path);
  } else if (kind == "drivers") {
    (void)Drivers::load_csv(path);
  } else if (kind == "timeseries") {
    const CsvDoc doc = read_csv(path);
    check_columns(doc, {"year", "variable", "mean", "stderr"}, path);
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
      (void)int_field(doc, i, 0, path);
      bool known = false;
      for (const char* name : kColumnNames) known = known || doc.rows[i][1] == name;
      if (!known) {
        throw ConfigError(path + ": unknown variable '" + doc.rows[i][1] + "' (line " +
                          std::to_string(i + 2) + ")");
      }
      (void)num_field(doc, i, 2, path);
      (void)num_field(doc, i, 3, path);
    }
  } else if (kind == "snapshot") {
    const CsvDoc doc = read_csv(path);
    check_columns(doc, {"x", "y", "land_use", "management", "epsilon"}, path);
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
      (void)int_field(doc, i, 0, path);
      (void)int_field(doc, i, 1, path);
      const std::string& use = doc.rows[i][2];
      if (use != "natural" && use != "crop" && use != "pasture") {
        throw ConfigError(path + ": unknown land_use '" + use + "' (line " +
                          std::to_string(i + 2) + ")");
      }
      const std::string& mgmt = doc.rows[i][3];
      if (mgmt != "none" && mgmt != "conventional" && mgmt != "organic") {
        throw ConfigError(path + ": unknown management '" + mgmt + "' (line " +
                          std::to_string(i + 2) + ")");
      }
      (void)num_field(doc, i, 4, path);
    }
  } else if (kind == "scenarios") {
    const CsvDoc doc = read_csv(path);
    check_columns(doc,
                  {"portfolio_id", "label", "delta_forest_pct", "delta_degraded_pct",
                   "rank_forest", "rank_degraded"},
                  path);
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
      (void)int_field(doc, i, 0, path);
      (void)num_field(doc, i, 2, path);
      (void)num_field(doc, i, 3, path);
      (void)int_field(doc, i, 4, path);
      (void)int_field(doc, i, 5, path);
    }
  } else if (kind == "legend") {
    const CsvDoc doc = read_csv(path);
    check_columns(doc, {"portfolio_id", "policy", "magnitude"}, path);
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
      (void)int_field(doc, i, 0, path);
      (void)parse_policy_kind(doc.rows[i][1]);
      (void)num_field(doc, i, 2, path);
    }
  } else if (kind == "sweep") {
    const CsvDoc doc = read_csv(path);
    check_columns(doc, {"rho", "delta_forest_pct", "delta_degraded_pct", "improves"}, path);
    for (std::size_t i = 0; i < doc.rows.size(); ++i) {
      (void)num_field(doc, i, 0, path);
      (void)num_field(doc, i, 1, path);
      (void)num_field(doc, i, 2, path);
      (void)int_field(doc, i, 3, path);
    }
  } else {
    throw ConfigError("unknown artifact kind '" + kind +
                      "' (expected config, scenario, drivers, timeseries, snapshot, scenarios, "
                      "legend or sweep)");
  }
  std::printf("%s: valid %s file\n", path.c_str(), kind.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"foodland: spatial food-demand and land-use scenario simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "foodland 1.0.0");

  CommonOpts run_opts;
  CLI::App* run = app.add_subcommand("run", "run a baseline ensemble and write time series");
  add_common(run, run_opts);

  CommonOpts scen_opts;
  std::string scenario_path;
  CLI::App* scen = app.add_subcommand("scenario", "compare one policy portfolio to baseline");
  add_common(scen, scen_opts);
  scen->add_option("--scenario", scenario_path, "portfolio file (policies.<kind> = magnitude)")
      ->required();

  CommonOpts sweep_opts;
  std::string grid_spec = "0:1:0.1";
  std::string base_path;
  CLI::App* sweep = app.add_subcommand("sweep", "sweep demand-reduction strength");
  add_common(sweep, sweep_opts);
  sweep->add_option("--grid", grid_spec, "damping grid lo:hi:step (default 0:1:0.1)");
  sweep->add_option("--base", base_path, "portfolio file applied at every grid point");

  CommonOpts pf_opts;
  std::string pool_path;
  int top_k = 10;
  CLI::App* pf = app.add_subcommand("portfolio", "enumerate and rank policy portfolios");
  add_common(pf, pf_opts);
  pf->add_option("--pool", pool_path, "instrument pool file (policies.<kind> = magnitude)");
  pf->add_option("--top", top_k, "leaderboard size (default 10)");

  std::string fit_data, fit_out;
  CLI::App* fit = app.add_subcommand("fit", "fit demand curves from per-capita observations");
  fit->add_option("--data", fit_data, "CSV: income_per_capita,calories_per_capita,meat_per_capita")
      ->required();
  fit->add_option("--out-config", fit_out, "write fitted coefficients as a config fragment");

  CommonOpts snap_opts;
  std::string years_spec;
  CLI::App* snap = app.add_subcommand("snapshot", "write per-cell state of a single run");
  add_common(snap, snap_opts);
  snap->add_option("--years", years_spec, "comma-separated snapshot years");

  std::string val_kind, val_path;
  CLI::App* val = app.add_subcommand("validate", "check an artifact file against its schema");
  val->add_option("kind", val_kind, "config|scenario|drivers|timeseries|snapshot|scenarios|legend|sweep")
      ->required();
  val->add_option("path", val_path, "file to check")->required();

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(run_opts);
    if (scen->parsed()) return cmd_scenario(scen_opts, scenario_path);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, grid_spec, base_path);
    if (pf->parsed()) return cmd_portfolio(pf_opts, pool_path, top_k);
    if (fit->parsed()) return cmd_fit(fit_data, fit_out);
    if (snap->parsed()) return cmd_snapshot(snap_opts, years_spec);
    if (val->parsed()) return cmd_validate(val_kind, val_path);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ModelError& e) {
    std::fprintf(stderr, "model error: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
