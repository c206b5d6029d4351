#include "foodland/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "foodland/csv.hpp"
#include "foodland/errors.hpp"

namespace foodland {

namespace {

const char* const kKindNames[kPolicyKindCount] = {
    "chemical_reduction",
    "organic_crop_expansion",
    "organic_meat_expansion",
    "livestock_density_reduction",
    "deforestation_restriction_crop",
    "deforestation_restriction_meat",
    "crop_demand_reduction",
    "meat_demand_reduction",
};

}  // namespace

const char* policy_kind_name(PolicyKind kind) {
  const int i = static_cast<int>(kind);
  if (i < 0 || i >= kPolicyKindCount) throw ConfigError("unknown policy kind value");
  return kKindNames[i];
}

PolicyKind parse_policy_kind(const std::string& name) {
  for (int i = 0; i < kPolicyKindCount; ++i) {
    if (name == kKindNames[i]) return static_cast<PolicyKind>(i);
  }
  throw ConfigError("unknown policy kind '" + name + "'");
}

Portfolio::Portfolio(std::vector<PolicySpec> specs) : specs_(std::move(specs)) {
  std::sort(specs_.begin(), specs_.end(), [](const PolicySpec& a, const PolicySpec& b) {
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  for (std::size_t i = 1; i < specs_.size(); ++i) {
    if (specs_[i].kind == specs_[i - 1].kind) {
      throw ConfigError(std::string("duplicate policy '") + policy_kind_name(specs_[i].kind) +
                        "' in portfolio");
    }
  }
}

bool Portfolio::contains(PolicyKind kind) const {
  for (const PolicySpec& s : specs_) {
    if (s.kind == kind) return true;
  }
  return false;
}

std::uint32_t Portfolio::id() const {
  std::uint32_t mask = 0;
  for (const PolicySpec& s : specs_) mask |= 1u << static_cast<int>(s.kind);
  return mask;
}

std::string Portfolio::label() const {
  if (specs_.empty()) return "baseline";
  std::string out;
  for (const PolicySpec& s : specs_) {
    if (!out.empty()) out.push_back('+');
    out += policy_kind_name(s.kind);
  }
  return out;
}

ModelParams apply_policy(const ModelParams& params, const PolicySpec& spec) {
  if (!(spec.magnitude >= 0.0 && spec.magnitude <= 1.0)) {
    throw ConfigError(std::string("policy '") + policy_kind_name(spec.kind) +
                      "' magnitude must be in [0, 1]");
  }
  ModelParams out = params;
  const double m = spec.magnitude;
  switch (spec.kind) {
    case PolicyKind::chemical_reduction:
      out.policy.chem_rate_scale = 1.0 - m;
      break;
    case PolicyKind::organic_crop_expansion:
      out.policy.organic_growth_scale_crop = 1.0 + m;
      break;
    case PolicyKind::organic_meat_expansion:
      out.policy.organic_growth_scale_pasture = 1.0 + m;
      break;
    case PolicyKind::livestock_density_reduction:
      out.policy.stock_rate_scale = 1.0 - m;
      out.policy.cap_stock_at_policy_year = true;
      break;
    case PolicyKind::deforestation_restriction_crop:
      out.policy.expand_gain_crop_scale = 1.0 - m;
      break;
    case PolicyKind::deforestation_restriction_meat:
      out.policy.expand_gain_pasture_scale = 1.0 - m;
      break;
    case PolicyKind::crop_demand_reduction:
      out.policy.demand_damping_crop = m;
      break;
    case PolicyKind::meat_demand_reduction:
      out.policy.demand_damping_meat = m;
      break;
  }
  return out;
}

ModelParams apply_portfolio(const ModelParams& params, const Portfolio& portfolio) {
  ModelParams out = params;
  for (const PolicySpec& s : portfolio.specs()) out = apply_policy(out, s);
  return out;
}

ScenarioOutcome compare_to_baseline(const EnsembleResult& baseline,
                                    const EnsembleResult& scenario, const Portfolio& portfolio,
                                    int end_year) {
  ScenarioOutcome out;
  out.portfolio = portfolio;
  const double f0 = baseline.mean_at(end_year, cols::area_forest);
  const double d0 = baseline.mean_at(end_year, cols::area_degraded);
  out.forest_end = scenario.mean_at(end_year, cols::area_forest);
  out.degraded_end = scenario.mean_at(end_year, cols::area_degraded);
  out.delta_forest_pct = percent_delta(out.forest_end, f0);
  out.delta_degraded_pct = percent_delta(out.degraded_end, d0);
  return out;
}

ScenarioOutcome run_scenario(const ModelParams& params, const Drivers& drivers,
                             const Portfolio& portfolio, const EnsembleResult& baseline,
                             int n_runs, std::uint64_t master_seed, int n_threads) {
  const ModelParams scenario_params = apply_portfolio(params, portfolio);
  const EnsembleResult ens = run_ensemble(scenario_params, drivers, n_runs, master_seed,
                                          n_threads, /*keep_going=*/false, /*keep_runs=*/false);
  return compare_to_baseline(baseline, ens, portfolio, params.end_year);
}

double interpolate_crossing(double x0, double y0, double x1, double y1) {
  const double denom = y0 - y1;
  if (denom == 0.0 || std::isnan(denom)) return x1;
  const double t = y0 / denom;
  if (!(t >= 0.0 && t <= 1.0)) return x1;
  return x0 + t * (x1 - x0);
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("sweep grid must have hi >= lo, step > 0");
  std::vector<double> out;
  // index-based points avoid accumulated rounding; the half-step tolerance
  // keeps the endpoint when (hi - lo) / step is integral up to roundoff
  for (int i = 0;; ++i) {
    const double x = lo + i * step;
    if (x > hi + step / 2) break;
    out.push_back(std::min(x, hi));
  }
  return out;
}

SweepResult demand_sweep(const ModelParams& params, const Drivers& drivers,
                         const Portfolio& base, const std::vector<double>& grid, int n_runs,
                         std::uint64_t master_seed, int n_threads) {
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw ConfigError("sweep grid values must be in [0, 1]");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError("sweep grid must be strictly increasing");
  }
  if (base.contains(PolicyKind::crop_demand_reduction) ||
      base.contains(PolicyKind::meat_demand_reduction)) {
    throw ConfigError("sweep base portfolio must not already include demand reduction");
  }

  const EnsembleResult baseline = run_ensemble(params, drivers, n_runs, master_seed, n_threads,
                                               /*keep_going=*/false, /*keep_runs=*/false);
  SweepResult out;
  out.points.reserve(grid.size());
  for (double rho : grid) {
    std::vector<PolicySpec> specs = base.specs();
    specs.push_back({PolicyKind::crop_demand_reduction, rho});
    specs.push_back({PolicyKind::meat_demand_reduction, rho});
    const ScenarioOutcome oc = run_scenario(params, drivers, Portfolio(std::move(specs)),
                                            baseline, n_runs, master_seed, n_threads);
    SweepPoint pt;
    pt.rho = rho;
    pt.delta_forest_pct = oc.delta_forest_pct;
    pt.delta_degraded_pct = oc.delta_degraded_pct;
    pt.improves = oc.delta_forest_pct && oc.delta_degraded_pct && *oc.delta_forest_pct > 0.0 &&
                  *oc.delta_degraded_pct < 0.0;
    out.points.push_back(pt);
  }

  for (std::size_t i = 0; i < out.points.size(); ++i) {
    if (!out.points[i].improves) continue;
    if (i == 0) {
      out.rho_star = out.points[0].rho;
      break;
    }
    // refine within the bracketing grid step, one crossing per condition
    // that still failed at the previous point
    const SweepPoint& lo = out.points[i - 1];
    const SweepPoint& hi = out.points[i];
    double star = lo.rho;
    if (!lo.delta_forest_pct || *lo.delta_forest_pct <= 0.0) {
      const double y0 = lo.delta_forest_pct ? *lo.delta_forest_pct : -1.0;
      star = std::max(star, interpolate_crossing(lo.rho, y0, hi.rho, *hi.delta_forest_pct));
    }
    if (!lo.delta_degraded_pct || *lo.delta_degraded_pct >= 0.0) {
      const double y0 = lo.delta_degraded_pct ? *lo.delta_degraded_pct : 1.0;
      star = std::max(star, interpolate_crossing(lo.rho, y0, hi.rho, *hi.delta_degraded_pct));
    }
    out.rho_star = std::clamp(star, lo.rho, hi.rho);
    break;
  }
  return out;
}

namespace {

// Ordering used for both leaderboards: defined deltas first, then by value
// (better first), then by smaller portfolio id for a deterministic result.
bool rank_less(const RankedPortfolio& a, const RankedPortfolio& b, bool forest) {
  const std::optional<double>& da = forest ? a.delta_forest_pct : a.delta_degraded_pct;
  const std::optional<double>& db = forest ? b.delta_forest_pct : b.delta_degraded_pct;
  if (da.has_value() != db.has_value()) return da.has_value();
  if (da && db && *da != *db) return forest ? *da > *db : *da < *db;
  return a.portfolio.id() < b.portfolio.id();
}

}  // namespace

EnumerationResult enumerate_and_rank(const ModelParams& params, const Drivers& drivers,
                                     const std::vector<PolicySpec>& pool, int top_k, int n_runs,
                                     std::uint64_t master_seed, int n_threads) {
  if (pool.empty()) throw ConfigError("policy pool is empty");
  if (pool.size() > 12) throw ConfigError("policy pool is limited to 12 instruments");
  if (top_k <= 0) throw ConfigError("top_k must be positive");
  {
    Portfolio check{pool};  // validates distinct kinds and sorts a copy
    (void)check;
  }

  const EnsembleResult baseline = run_ensemble(params, drivers, n_runs, master_seed, n_threads,
                                               /*keep_going=*/false, /*keep_runs=*/false);
  EnumerationResult out;
  const std::uint32_t n_subsets = 1u << pool.size();
  out.portfolios.reserve(n_subsets - 1);
  for (std::uint32_t mask = 1; mask < n_subsets; ++mask) {
    std::vector<PolicySpec> specs;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (mask & (1u << i)) specs.push_back(pool[i]);
    }
    const ScenarioOutcome oc = run_scenario(params, drivers, Portfolio(std::move(specs)),
                                            baseline, n_runs, master_seed, n_threads);
    RankedPortfolio rp;
    rp.portfolio = oc.portfolio;
    rp.delta_forest_pct = oc.delta_forest_pct;
    rp.delta_degraded_pct = oc.delta_degraded_pct;
    out.portfolios.push_back(std::move(rp));
  }
  std::sort(out.portfolios.begin(), out.portfolios.end(),
            [](const RankedPortfolio& a, const RankedPortfolio& b) {
              return a.portfolio.id() < b.portfolio.id();
            });

  std::vector<std::size_t> order(out.portfolios.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t k = std::min<std::size_t>((std::size_t)top_k, order.size());

  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rank_less(out.portfolios[a], out.portfolios[b], /*forest=*/true);
  });
  for (std::size_t r = 0; r < k; ++r) {
    out.portfolios[order[r]].rank_forest = (int)r + 1;
    out.top_forest.push_back(out.portfolios[order[r]].portfolio.id());
  }

  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rank_less(out.portfolios[a], out.portfolios[b], /*forest=*/false);
  });
  for (std::size_t r = 0; r < k; ++r) {
    out.portfolios[order[r]].rank_degraded = (int)r + 1;
    out.top_degraded.push_back(out.portfolios[order[r]].portfolio.id());
  }

  for (std::uint32_t id : out.top_forest) {
    if (std::find(out.top_degraded.begin(), out.top_degraded.end(), id) !=
        out.top_degraded.end()) {
      out.in_both.push_back(id);
    }
  }
  return out;
}

std::string scenarios_csv(const EnumerationResult& result) {
  std::string out = "portfolio_id,label,delta_forest_pct,delta_degraded_pct,rank_forest,rank_degraded\n";
  for (const RankedPortfolio& rp : result.portfolios) {
    out += std::to_string(rp.portfolio.id());
    out.push_back(',');
    out += rp.portfolio.label();
    out.push_back(',');
    out += format_double(rp.delta_forest_pct ? *rp.delta_forest_pct : std::nan(""));
    out.push_back(',');
    out += format_double(rp.delta_degraded_pct ? *rp.delta_degraded_pct : std::nan(""));
    out.push_back(',');
    out += std::to_string(rp.rank_forest);
    out.push_back(',');
    out += std::to_string(rp.rank_degraded);
    out.push_back('\n');
  }
  return out;
}

std::string portfolio_legend_csv(const EnumerationResult& result) {
  std::string out = "portfolio_id,policy,magnitude\n";
  for (const RankedPortfolio& rp : result.portfolios) {
    for (const PolicySpec& s : rp.portfolio.specs()) {
      out += std::to_string(rp.portfolio.id());
      out.push_back(',');
      out += policy_kind_name(s.kind);
      out.push_back(',');
      out += format_double(s.magnitude);
      out.push_back('\n');
    }
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "rho,delta_forest_pct,delta_degraded_pct,improves\n";
  for (const SweepPoint& pt : result.points) {
    out += format_double(pt.rho);
    out.push_back(',');
    out += format_double(pt.delta_forest_pct ? *pt.delta_forest_pct : std::nan(""));
    out.push_back(',');
    out += format_double(pt.delta_degraded_pct ? *pt.delta_degraded_pct : std::nan(""));
    out.push_back(',');
    out += pt.improves ? "1" : "0";
    out.push_back('\n');
  }
  return out;
}

}  // namespace foodland
