#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "foodland/drivers.hpp"
#include "foodland/engine.hpp"
#include "foodland/params.hpp"

namespace foodland {

// Policy instruments that can be switched on from the policy year onward.
enum class PolicyKind : int {
  chemical_reduction = 0,          // slow the growth of chemical input use
  organic_crop_expansion = 1,      // accelerate the organic share on cropland
  organic_meat_expansion = 2,      // accelerate the organic share on pasture
  livestock_density_reduction = 3, // slow and cap stocking density
  deforestation_restriction_crop = 4, // damp demand-driven cropland expansion
  deforestation_restriction_meat = 5, // damp demand-driven pasture expansion
  crop_demand_reduction = 6,       // damp growth of crop food demand
  meat_demand_reduction = 7,       // damp growth of meat demand
};

inline constexpr int kPolicyKindCount = 8;

const char* policy_kind_name(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& name);  // throws ConfigError

struct PolicySpec {
  PolicyKind kind = PolicyKind::chemical_reduction;
  double magnitude = 0.10;  // in [0, 1]

  bool operator==(const PolicySpec&) const = default;
};

// A set of policies with pairwise distinct kinds, kept in canonical kind order.
class Portfolio {
 public:
  Portfolio() = default;
  explicit Portfolio(std::vector<PolicySpec> specs);  // throws ConfigError on duplicates

  const std::vector<PolicySpec>& specs() const { return specs_; }
  bool empty() const { return specs_.empty(); }
  bool contains(PolicyKind kind) const;

  // Bitmask over PolicyKind values; identifies the member set, not magnitudes.
  std::uint32_t id() const;
  std::string label() const;  // "baseline" or "+"-joined kind names

  bool operator==(const Portfolio&) const = default;

 private:
  std::vector<PolicySpec> specs_;
};

// Returns a copy of `params` with the policy levers set for one instrument.
// Setting the same lever twice with the same magnitude is a no-op.
ModelParams apply_policy(const ModelParams& params, const PolicySpec& spec);
ModelParams apply_portfolio(const ModelParams& params, const Portfolio& portfolio);

struct ScenarioOutcome {
  Portfolio portfolio;
  double forest_end = 0;    // ensemble mean forest area in the final year
  double degraded_end = 0;  // ensemble mean degraded area in the final year
  std::optional<double> delta_forest_pct;    // vs baseline, percent
  std::optional<double> delta_degraded_pct;  // vs baseline, percent
};

ScenarioOutcome compare_to_baseline(const EnsembleResult& baseline,
                                    const EnsembleResult& scenario, const Portfolio& portfolio,
                                    int end_year);

// Runs the portfolio against `baseline` with the same seed protocol the
// baseline was produced with (same master seed, same run count).
ScenarioOutcome run_scenario(const ModelParams& params, const Drivers& drivers,
                             const Portfolio& portfolio, const EnsembleResult& baseline,
                             int n_runs, std::uint64_t master_seed, int n_threads);

struct SweepPoint {
  double rho = 0;
  std::optional<double> delta_forest_pct;
  std::optional<double> delta_degraded_pct;
  bool improves = false;  // forest up AND degraded down vs baseline
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::optional<double> rho_star;  // smallest damping that improves both
};

// Linear zero crossing of a segment; returns x1 when the segment is flat.
double interpolate_crossing(double x0, double y0, double x1, double y1);

// Sweeps a demand-damping magnitude rho over `grid` (ascending, in [0, 1]).
// Each point runs `base` plus crop- and meat-demand reduction at rho.
SweepResult demand_sweep(const ModelParams& params, const Drivers& drivers,
                         const Portfolio& base, const std::vector<double>& grid, int n_runs,
                         std::uint64_t master_seed, int n_threads);

std::vector<double> make_grid(double lo, double hi, double step);  // throws ConfigError

struct RankedPortfolio {
  Portfolio portfolio;
  std::optional<double> delta_forest_pct;
  std::optional<double> delta_degraded_pct;
  int rank_forest = 0;    // 1-based within the top list, 0 = not ranked
  int rank_degraded = 0;  // 1-based within the top list, 0 = not ranked
};

struct EnumerationResult {
  std::vector<RankedPortfolio> portfolios;  // all non-empty subsets, by id
  std::vector<std::uint32_t> top_forest;    // portfolio ids, best first
  std::vector<std::uint32_t> top_degraded;  // portfolio ids, best first
  std::vector<std::uint32_t> in_both;       // ids in both top lists, forest order
};

// Evaluates every non-empty subset of `pool` (at most 12 instruments) against
// a shared-seed baseline and ranks by forest gain and by degraded-land
// reduction in the final year. Ties break toward the smaller portfolio id.
EnumerationResult enumerate_and_rank(const ModelParams& params, const Drivers& drivers,
                                     const std::vector<PolicySpec>& pool, int top_k, int n_runs,
                                     std::uint64_t master_seed, int n_threads);

std::string scenarios_csv(const EnumerationResult& result);
std::string portfolio_legend_csv(const EnumerationResult& result);
std::string sweep_csv(const SweepResult& result);

}  // namespace foodland
