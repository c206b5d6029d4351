#include "foodland/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "foodland/csv.hpp"
#include "foodland/errors.hpp"

namespace foodland {

const std::array<const char*, cols::count> kColumnNames = {
    "demand_meat",
    "demand_crop_food",
    "demand_feed",
    "demand_crop_total",
    "output_crop",
    "output_crop_conv",
    "output_crop_org",
    "output_meat",
    "output_meat_planned",
    "output_meat_conv",
    "output_meat_org",
    "feed_scaling_factor",
    "tech",
    "mech",
    "chem",
    "stock",
    "eco_service",
    "area_natural",
    "area_crop",
    "area_pasture",
    "area_forest",
    "area_degraded",
    "crop_organic_cells",
    "pasture_organic_cells",
    "mean_eps_natural",
    "mean_eps_crop_conv",
    "mean_eps_crop_org",
    "mean_eps_pasture_conv",
    "mean_eps_pasture_org",
    "converted_crop",
    "converted_pasture",
    "abandoned_crop",
    "abandoned_pasture",
    "conversion_shortage",
    "saturation_events",
};

const YearRow& RunRecord::at_year(int year) const {
  for (const YearRow& r : rows) {
    if (r.year == year) return r;
  }
  throw ModelError("run record has no year " + std::to_string(year));
}

namespace {

void fill_metrics(YearRow& row, const LandscapeMetrics& m) {
  row.v[cols::area_natural] = m.area_natural;
  row.v[cols::area_crop] = m.area_crop;
  row.v[cols::area_pasture] = m.area_pasture;
  row.v[cols::area_forest] = m.area_forest;
  row.v[cols::area_degraded] = m.area_degraded;
  row.v[cols::crop_organic_cells] = m.crop_organic;
  row.v[cols::pasture_organic_cells] = m.pasture_organic;
  row.v[cols::mean_eps_natural] = m.mean_eps_natural;
  row.v[cols::mean_eps_crop_conv] = m.mean_eps_crop_conv;
  row.v[cols::mean_eps_crop_org] = m.mean_eps_crop_org;
  row.v[cols::mean_eps_pasture_conv] = m.mean_eps_pasture_conv;
  row.v[cols::mean_eps_pasture_org] = m.mean_eps_pasture_org;
}

}  // namespace

Simulation::Simulation(const ModelParams& params, const Drivers& drivers, std::uint64_t seed)
    : params_(params), drivers_(&drivers), rng_(seed) {
  params_.validate();
  if (!drivers.covers(params_.start_year) || !drivers.covers(params_.end_year)) {
    throw ModelError("drivers must cover the full timeline [" +
                     std::to_string(params_.start_year) + ", " +
                     std::to_string(params_.end_year) + "]");
  }
  land_ = Landscape::initialize(params_, rng_);
  demand_ = DemandModel::initialize(drivers, params_);

  const DriverPoint pol = drivers.at(params_.policy_year);
  organic_share_crop_policy_ = pol.organic_share_crop;
  organic_share_pasture_policy_ = pol.organic_share_pasture;

  inputs_ = InputLevels{params_.tech_initial, 1.0, 1.0, 1.0};
  year_ = params_.start_year;

  // start-year row: initial condition snapshot, no land change or decay yet
  const DriverPoint d0 = drivers.at(year_);
  land_.set_organic_share(d0.organic_share_crop, d0.organic_share_pasture, rng_);

  const DemandModel::Exo exo = demand_.exogenous(drivers, year_, params_);
  const double d_meat = exo.meat;
  const double d_crop_food = exo.crop_food;

  const LandscapeMetrics met = land_.metrics(params_);
  const int crop_conv = met.area_crop - met.crop_organic;
  const int pasture_conv = met.area_pasture - met.pasture_organic;
  const double q_cc =
      crop_output_conventional(crop_conv, inputs_.tech, inputs_.chem, inputs_.mech,
                               met.mean_eps_crop_conv, params_.chem_exponent,
                               params_.mech_exponent);
  const double q_co =
      crop_output_organic(met.crop_organic, inputs_.tech, inputs_.mech, met.mean_eps_crop_org,
                          params_.chem_exponent, params_.mech_exponent);
  const double q_mc = meat_output_conventional(pasture_conv, inputs_.tech, inputs_.stock,
                                               met.mean_eps_pasture_conv, params_.stock_exponent);
  const double q_mo =
      meat_output_organic(met.pasture_organic, inputs_.tech, inputs_.stock,
                          params_.stock_cap_organic, met.mean_eps_pasture_org,
                          params_.stock_exponent);
  const double q_crop = q_cc + q_co;
  const double planned_meat = q_mc + q_mo;
  const double feed = feed_demand(params_.feed_coeff, planned_meat);
  const double d_crop_total = d_crop_food + feed;
  const double scale = feed_scaling(q_crop, d_crop_food, feed);
  const double q_meat = planned_meat * scale;
  const double service = land_.ecosystem_service(params_);

  YearRow row;
  row.year = year_;
  row.v[cols::demand_meat] = d_meat;
  row.v[cols::demand_crop_food] = d_crop_food;
  row.v[cols::demand_feed] = feed;
  row.v[cols::demand_crop_total] = d_crop_total;
  row.v[cols::output_crop] = q_crop;
  row.v[cols::output_crop_conv] = q_cc;
  row.v[cols::output_crop_org] = q_co;
  row.v[cols::output_meat] = q_meat;
  row.v[cols::output_meat_planned] = planned_meat;
  row.v[cols::output_meat_conv] = q_mc;
  row.v[cols::output_meat_org] = q_mo;
  row.v[cols::feed_scaling_factor] = scale;
  row.v[cols::tech] = inputs_.tech;
  row.v[cols::mech] = inputs_.mech;
  row.v[cols::chem] = inputs_.chem;
  row.v[cols::stock] = inputs_.stock;
  row.v[cols::eco_service] = service;
  fill_metrics(row, met);
  last_row_ = row;

  last_demand_meat_ = d_meat;
  last_output_meat_ = q_meat;
  last_demand_crop_ = d_crop_total;
  last_output_crop_ = q_crop;
  last_feed_ = feed;
}

std::pair<double, double> Simulation::organic_shares_at(int year) const {
  const DriverPoint d = drivers_->at(year);
  double sc = d.organic_share_crop;
  double sp = d.organic_share_pasture;
  if (year > params_.policy_year) {
    const double gc = params_.policy.organic_growth_scale_crop;
    const double gp = params_.policy.organic_growth_scale_pasture;
    if (gc != 1.0) {
      sc = std::clamp(organic_share_crop_policy_ + gc * (sc - organic_share_crop_policy_), 0.0,
                      1.0);
    }
    if (gp != 1.0) {
      sp = std::clamp(organic_share_pasture_policy_ + gp * (sp - organic_share_pasture_policy_),
                      0.0, 1.0);
    }
  }
  return {sc, sp};
}

const YearRow& Simulation::step() {
  if (year_ >= params_.end_year) {
    throw ModelError("step past the end of the timeline (" + std::to_string(params_.end_year) +
                     ")");
  }
  const int y = year_ + 1;

  // 1. exogenous demand with previous-period shortfall feedback
  const DemandModel::Exo exo = demand_.exogenous(*drivers_, y, params_);
  const double fb_meat = feedback_factor(last_demand_meat_, last_output_meat_,
                                         params_.alpha_meat, params_.symmetric_demand_feedback);
  const double fb_crop = feedback_factor(last_demand_crop_, last_output_crop_,
                                         params_.alpha_crop, params_.symmetric_demand_feedback);
  const double d_meat = exo.meat * fb_meat;
  const double d_crop_food = exo.crop_food * fb_crop;

  // 2. technology
  inputs_.tech = advance_technology(inputs_.tech, params_.tech_rate, params_.tech_cap);

  // 3. input adjustment against last period's realized outputs; the crop
  //    demand proxy carries last year's feed component because this year's
  //    feed is known only after meat is planned
  const double d_crop_proxy = d_crop_food + last_feed_;
  inputs_ = update_inputs(inputs_, d_crop_proxy, last_output_crop_, d_meat, last_output_meat_,
                          params_.mech_rate, params_.chem_rate_at(y), params_.stock_rate_at(y));
  if (params_.policy.cap_stock_at_policy_year && y >= params_.policy_year) {
    if (!stock_policy_cap_) {
      stock_policy_cap_ = inputs_.stock;  // freeze at the policy-year level
    } else {
      inputs_.stock = std::min(inputs_.stock, *stock_policy_cap_);
    }
  }

  // 4. organic share trajectory (policy-scaled growth after the policy year)
  const auto [share_crop, share_pasture] = organic_shares_at(y);
  land_.set_organic_share(share_crop, share_pasture, rng_);

  // 5. production on the pre-conversion landscape
  const LandscapeMetrics met = land_.metrics(params_);
  const int crop_conv = met.area_crop - met.crop_organic;
  const int pasture_conv = met.area_pasture - met.pasture_organic;
  const double q_cc =
      crop_output_conventional(crop_conv, inputs_.tech, inputs_.chem, inputs_.mech,
                               met.mean_eps_crop_conv, params_.chem_exponent,
                               params_.mech_exponent);
  const double q_co =
      crop_output_organic(met.crop_organic, inputs_.tech, inputs_.mech, met.mean_eps_crop_org,
                          params_.chem_exponent, params_.mech_exponent);
  const double q_mc = meat_output_conventional(pasture_conv, inputs_.tech, inputs_.stock,
                                               met.mean_eps_pasture_conv, params_.stock_exponent);
  const double q_mo =
      meat_output_organic(met.pasture_organic, inputs_.tech, inputs_.stock,
                          params_.stock_cap_organic, met.mean_eps_pasture_org,
                          params_.stock_exponent);
  const double q_crop = q_cc + q_co;
  const double planned_meat = q_mc + q_mo;

  // 6. feed coupling and the crop-availability scale-back on meat
  const double feed = feed_demand(params_.feed_coeff, planned_meat);
  const double d_crop_total = d_crop_food + feed;
  const double scale = feed_scaling(q_crop, d_crop_food, feed);
  const double q_meat = planned_meat * scale;

  // 7. land-use response: current demand vs previous period's output
  const LandMove crop_mv =
      land_response(d_crop_total, last_output_crop_, params_.expand_gain_crop_at(y),
                    params_.contract_gain_crop, params_.churn_fraction, params_.total_cells(),
                    params_.land_floor_mode);
  const LandMove pasture_mv =
      land_response(d_meat, last_output_meat_, params_.expand_gain_pasture_at(y),
                    params_.contract_gain_pasture, params_.churn_fraction, params_.total_cells(),
                    params_.land_floor_mode);
  // crop expansion draws on the natural pool first, then pasture
  const int conv_c = land_.convert_cells(LandUse::crop, crop_mv.expand_cells, rng_);
  const int conv_p = land_.convert_cells(LandUse::pasture, pasture_mv.expand_cells, rng_);
  const int ab_c = land_.abandon_cells(LandUse::crop, crop_mv.contract_cells, rng_);
  const int ab_p = land_.abandon_cells(LandUse::pasture, pasture_mv.contract_cells, rng_);
  const int shortage =
      (crop_mv.expand_cells - conv_c) + (pasture_mv.expand_cells - conv_p);

  // 8. aggregate ecosystem service on the post-conversion landscape
  const double service = land_.ecosystem_service(params_);

  // 9. integrity dynamics under this year's pressures
  const int events = land_.update_integrity(
      IntegrityPressure{inputs_.mech, inputs_.chem, inputs_.stock, service}, params_);

  // 10. record the end-of-year state
  YearRow row;
  row.year = y;
  row.v[cols::demand_meat] = d_meat;
  row.v[cols::demand_crop_food] = d_crop_food;
  row.v[cols::demand_feed] = feed;
  row.v[cols::demand_crop_total] = d_crop_total;
  row.v[cols::output_crop] = q_crop;
  row.v[cols::output_crop_conv] = q_cc;
  row.v[cols::output_crop_org] = q_co;
  row.v[cols::output_meat] = q_meat;
  row.v[cols::output_meat_planned] = planned_meat;
  row.v[cols::output_meat_conv] = q_mc;
  row.v[cols::output_meat_org] = q_mo;
  row.v[cols::feed_scaling_factor] = scale;
  row.v[cols::tech] = inputs_.tech;
  row.v[cols::mech] = inputs_.mech;
  row.v[cols::chem] = inputs_.chem;
  row.v[cols::stock] = inputs_.stock;
  row.v[cols::eco_service] = service;
  row.v[cols::converted_crop] = conv_c;
  row.v[cols::converted_pasture] = conv_p;
  row.v[cols::abandoned_crop] = ab_c;
  row.v[cols::abandoned_pasture] = ab_p;
  row.v[cols::conversion_shortage] = shortage;
  row.v[cols::saturation_events] = events;
  fill_metrics(row, land_.metrics(params_));

  last_demand_meat_ = d_meat;
  last_output_meat_ = q_meat;
  last_demand_crop_ = d_crop_total;
  last_output_crop_ = q_crop;
  last_feed_ = feed;
  year_ = y;
  last_row_ = row;
  return last_row_;
}

std::vector<CellSnapshot> Simulation::snapshot() const {
  std::vector<CellSnapshot> out;
  out.reserve(land_.size());
  for (int i = 0; i < land_.size(); ++i) {
    const Cell& c = land_.cell(i);
    out.push_back({i % land_.width(), i / land_.width(), c.use, c.mgmt, c.eps});
  }
  return out;
}

RunRecord run_single(const ModelParams& params, const Drivers& drivers, std::uint64_t seed) {
  Simulation sim(params, drivers, seed);
  RunRecord rec;
  rec.rows.reserve(params.end_year - params.start_year + 1);
  rec.rows.push_back(sim.last_row());
  while (sim.year() < params.end_year) rec.rows.push_back(sim.step());
  return rec;
}

RunOutput run_single_with_snapshots(const ModelParams& params, const Drivers& drivers,
                                    std::uint64_t seed, const std::vector<int>& years) {
  for (int y : years) {
    if (y < params.start_year || y > params.end_year) {
      throw ConfigError("snapshot year " + std::to_string(y) + " outside the timeline");
    }
  }
  Simulation sim(params, drivers, seed);
  RunOutput out;
  out.record.rows.reserve(params.end_year - params.start_year + 1);
  auto maybe_snapshot = [&](int y) {
    if (std::find(years.begin(), years.end(), y) != years.end()) {
      out.snapshots.emplace_back(y, sim.snapshot());
    }
  };
  out.record.rows.push_back(sim.last_row());
  maybe_snapshot(sim.year());
  while (sim.year() < params.end_year) {
    out.record.rows.push_back(sim.step());
    maybe_snapshot(sim.year());
  }
  return out;
}

int EnsembleResult::year_index(int year) const {
  if (years.empty() || year < years.front() || year > years.back()) {
    throw ModelError("ensemble has no year " + std::to_string(year));
  }
  return year - years.front();
}

double EnsembleResult::mean_at(int year, int col) const { return mean[year_index(year)][col]; }

double EnsembleResult::stderr_at(int year, int col) const {
  return stderr_[year_index(year)][col];
}

EnsembleResult aggregate_records(std::vector<RunRecord> records, bool keep_runs) {
  if (records.empty()) throw ModelError("aggregate_records: no runs to aggregate");
  const std::size_t n_years = records[0].rows.size();
  for (const RunRecord& r : records) {
    if (r.rows.size() != n_years) throw ModelError("aggregate_records: ragged run records");
    for (std::size_t t = 0; t < n_years; ++t) {
      if (r.rows[t].year != records[0].rows[t].year) {
        throw ModelError("aggregate_records: year mismatch across runs");
      }
    }
  }
  EnsembleResult out;
  out.years.resize(n_years);
  out.mean.assign(n_years, {});
  out.stderr_.assign(n_years, {});
  out.n_defined.assign(n_years, {});
  for (std::size_t t = 0; t < n_years; ++t) {
    out.years[t] = records[0].rows[t].year;
    for (int c = 0; c < cols::count; ++c) {
      long double sum = 0;
      int n = 0;
      for (const RunRecord& r : records) {
        const double v = r.rows[t].v[c];
        if (!std::isnan(v)) {
          sum += v;
          ++n;
        }
      }
      if (n == 0) {
        out.mean[t][c] = std::nan("");
        out.stderr_[t][c] = std::nan("");
        out.n_defined[t][c] = 0;
        continue;
      }
      const double m = (double)(sum / n);
      long double ss = 0;
      for (const RunRecord& r : records) {
        const double v = r.rows[t].v[c];
        if (!std::isnan(v)) ss += (long double)(v - m) * (v - m);
      }
      out.mean[t][c] = m;
      out.stderr_[t][c] = n > 1 ? std::sqrt((double)(ss / (n - 1))) / std::sqrt((double)n) : 0.0;
      out.n_defined[t][c] = n;
    }
  }
  if (keep_runs) out.runs = std::move(records);
  return out;
}

EnsembleResult run_ensemble(const ModelParams& params, const Drivers& drivers, int n_runs,
                            std::uint64_t master_seed, int n_threads, bool keep_going,
                            bool keep_runs) {
  if (n_runs <= 0) throw ConfigError("run_ensemble: n_runs must be positive");
  const auto seeds = derive_seeds(master_seed, (std::size_t)n_runs);
  std::vector<RunRecord> records(n_runs);
  std::vector<std::exception_ptr> errors(n_runs);

  int hw = (int)std::thread::hardware_concurrency();
  if (hw <= 0) hw = 1;
  const int workers = std::max(1, std::min(n_threads > 0 ? n_threads : hw, n_runs));

  std::atomic<int> next{0};
  auto work = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_runs) return;
      try {
        records[i] = run_single(params, drivers, seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::vector<FailedRun> failed;
  std::vector<RunRecord> good;
  good.reserve(n_runs);
  for (int i = 0; i < n_runs; ++i) {
    if (errors[i]) {
      std::string msg;
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        msg = e.what();
      } catch (...) {
        msg = "unknown error";
      }
      if (!keep_going) {
        throw ModelError("run " + std::to_string(i) + " (seed " + std::to_string(seeds[i]) +
                         ") failed: " + msg);
      }
      failed.push_back({i, seeds[i], msg});
    } else {
      good.push_back(std::move(records[i]));
    }
  }
  if (good.empty()) throw ModelError("run_ensemble: every run failed");
  EnsembleResult out = aggregate_records(std::move(good), keep_runs);
  out.failed = std::move(failed);
  return out;
}

std::optional<double> percent_delta(double scenario_value, double baseline_value) {
  if (std::isnan(scenario_value) || std::isnan(baseline_value) || baseline_value == 0.0) {
    return std::nullopt;
  }
  return 100.0 * (scenario_value - baseline_value) / baseline_value;
}

std::string timeseries_csv(const EnsembleResult& ens) {
  std::string out = "year,variable,mean,stderr\n";
  for (std::size_t t = 0; t < ens.years.size(); ++t) {
    const std::string year = std::to_string(ens.years[t]);
    for (int c = 0; c < cols::count; ++c) {
      out += year;
      out.push_back(',');
      out += kColumnNames[c];
      out.push_back(',');
      out += format_double(ens.mean[t][c]);
      out.push_back(',');
      out += format_double(ens.stderr_[t][c]);
      out.push_back('\n');
    }
  }
  return out;
}

std::string snapshot_csv(const std::vector<CellSnapshot>& cells) {
  std::string out = "x,y,land_use,management,epsilon\n";
  for (const CellSnapshot& c : cells) {
    out += std::to_string(c.x);
    out.push_back(',');
    out += std::to_string(c.y);
    out.push_back(',');
    switch (c.use) {
      case LandUse::natural: out += "natural"; break;
      case LandUse::crop: out += "crop"; break;
      case LandUse::pasture: out += "pasture"; break;
    }
    out.push_back(',');
    if (c.use == LandUse::natural) {
      out += "none";
    } else {
      out += c.mgmt == Management::organic ? "organic" : "conventional";
    }
    out.push_back(',');
    out += format_double(c.eps);
    out.push_back('\n');
  }
  return out;
}

}  // namespace foodland
