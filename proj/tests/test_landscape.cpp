#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "foodland/errors.hpp"
#include "foodland/landscape.hpp"
#include "foodland/params.hpp"
#include "foodland/rng.hpp"

using namespace foodland;

namespace {

// Small landscape with deterministic per-cell rates (zero lifespan spread),
// so integrity updates can be checked against hand arithmetic.
ModelParams exact_params(double natural, double crop, double pasture) {
  ModelParams p;
  p.grid_width = 10;
  p.grid_height = 10;
  p.share_natural = natural;
  p.share_crop = crop;
  p.share_pasture = pasture;
  p.lifespan_log_sd_natural = 0.0;
  p.lifespan_log_sd_crop = 0.0;
  p.lifespan_log_sd_pasture = 0.0;
  return p;
}

int count_cells(const Landscape& land, LandUse use) {
  int n = 0;
  for (const Cell& c : land.cells()) {
    if (c.use == use) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("correlated_mask sets exactly the rounded cell count") {
  Rng rng(1);
  const auto half = correlated_mask(100, 100, 10.0, 0.5, rng);
  CHECK(std::count(half.begin(), half.end(), 1) == 5000);

  const auto none = correlated_mask(100, 100, 10.0, 0.0, rng);
  CHECK(std::count(none.begin(), none.end(), 1) == 0);

  const auto all = correlated_mask(100, 100, 10.0, 1.0, rng);
  CHECK(std::count(all.begin(), all.end(), 1) == 10000);

  const auto some = correlated_mask(100, 100, 10.0, 0.15, rng);
  CHECK(std::count(some.begin(), some.end(), 1) == 1500);

  CHECK_THROWS_AS(correlated_mask(0, 100, 10.0, 0.5, rng), ConfigError);
  CHECK_THROWS_AS(correlated_mask(100, 100, 10.0, 1.5, rng), ConfigError);
}

TEST_CASE("correlated_mask is spatially clustered, not white noise") {
  Rng rng(7);
  const int w = 100, h = 100;
  const auto mask = correlated_mask(w, h, 10.0, 0.5, rng);

  auto neighbor_agreement = [&](const std::vector<char>& m) {
    int agree = 0, pairs = 0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int i = y * w + x;
        const int right = y * w + (x + 1) % w;
        const int down = ((y + 1) % h) * w + x;
        agree += (m[i] == m[right]) + (m[i] == m[down]);
        pairs += 2;
      }
    }
    return double(agree) / pairs;
  };

  const double clustered = neighbor_agreement(mask);

  // destroying the arrangement drops agreement to the independence level
  std::vector<char> shuffled = mask;
  Rng rng2(8);
  shuffle_pinned(shuffled, rng2);
  const double null_level = neighbor_agreement(shuffled);

  CHECK(clustered > 0.8);
  CHECK(null_level < 0.6);
  CHECK(clustered > null_level + 0.2);
}

TEST_CASE("correlated_mask is reproducible per seed") {
  Rng a(42), b(42), c(43);
  CHECK(correlated_mask(50, 50, 10.0, 0.5, a) == correlated_mask(50, 50, 10.0, 0.5, b));
  CHECK(correlated_mask(50, 50, 10.0, 0.5, a) != correlated_mask(50, 50, 10.0, 0.5, c));
}

TEST_CASE("initialize lays out the default composition") {
  const ModelParams p;  // 100x100, shares 0.50/0.15/0.35
  Rng rng(1);
  const Landscape land = Landscape::initialize(p, rng);

  CHECK(land.size() == 10000);
  CHECK(land.area(LandUse::natural) == 5000);
  CHECK(land.area(LandUse::crop) == 1500);
  CHECK(land.area(LandUse::pasture) == 3500);
  CHECK(count_cells(land, LandUse::natural) == 5000);
  CHECK(count_cells(land, LandUse::crop) == 1500);
  CHECK(count_cells(land, LandUse::pasture) == 3500);
  CHECK(land.organic_count(LandUse::crop) == 0);
  CHECK(land.organic_count(LandUse::pasture) == 0);
  CHECK(land.initial_natural_eps_sum() == doctest::Approx(10000.0).epsilon(1e-12));
  land.check_consistency();

  for (const Cell& c : land.cells()) {
    if (c.use == LandUse::natural) {
      CHECK(c.eps == p.eps_max);
    } else {
      CHECK(c.eps == 1.0);
    }
    CHECK(c.mgmt == Management::conventional);
    CHECK(c.theta_natural > 0.0);
    CHECK(c.theta_crop > 0.0);
    CHECK(c.theta_pasture > 0.0);
  }

  const LandscapeMetrics m = land.metrics(p);
  CHECK(m.area_forest == 5000);  // pristine natural land counts as forest
  CHECK(m.area_degraded == 0);
  CHECK(m.mean_eps_crop_conv == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isnan(m.mean_eps_crop_org));  // empty subset
  CHECK(m.natural_eps_sum == doctest::Approx(10000.0).epsilon(1e-12));
}

TEST_CASE("initialize is deterministic per seed") {
  const ModelParams p;
  Rng a(5), b(5), c(6);
  const Landscape la = Landscape::initialize(p, a);
  const Landscape lb = Landscape::initialize(p, b);
  const Landscape lc = Landscape::initialize(p, c);

  bool identical_ab = true, identical_ac = true;
  for (int i = 0; i < la.size(); ++i) {
    identical_ab = identical_ab && la.cell(i).use == lb.cell(i).use &&
                   la.cell(i).eps == lb.cell(i).eps &&
                   la.cell(i).theta_crop == lb.cell(i).theta_crop;
    identical_ac = identical_ac && la.cell(i).use == lc.cell(i).use;
  }
  CHECK(identical_ab);
  CHECK_FALSE(identical_ac);
}

TEST_CASE("zero lifespan spread pins rates at the reciprocal medians") {
  const ModelParams p = exact_params(0.0, 1.0, 0.0);
  Rng rng(2);
  const Landscape land = Landscape::initialize(p, rng);
  for (const Cell& c : land.cells()) {
    CHECK(c.theta_crop == 1.0 / 10000.0);
    CHECK(c.theta_pasture == 1.0 / 5000.0);
    CHECK(c.theta_natural == 1.0 / 1000.0);
  }
}

TEST_CASE("unit lifespan spread keeps the median rate near the reciprocal median") {
  // per-cell lifespans are lognormal around the class median, so the median
  // of the sampled rates should recover 1/median within sampling error
  ModelParams p;  // defaults: log-sd 1, medians 10000/5000/1000
  Rng rng(3);
  const Landscape land = Landscape::initialize(p, rng);
  std::vector<double> crop_rates, pasture_rates, natural_rates;
  for (const Cell& c : land.cells()) {
    crop_rates.push_back(c.theta_crop);
    pasture_rates.push_back(c.theta_pasture);
    natural_rates.push_back(c.theta_natural);
  }
  auto median = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  CHECK(median(crop_rates) == doctest::Approx(1e-4).epsilon(0.05));
  CHECK(median(pasture_rates) == doctest::Approx(2e-4).epsilon(0.05));
  CHECK(median(natural_rates) == doctest::Approx(1e-3).epsilon(0.05));
}

TEST_CASE("ecosystem service is the normalized natural integrity to the power p") {
  ModelParams p = exact_params(1.0, 0.0, 0.0);
  Rng rng(4);
  Landscape land = Landscape::initialize(p, rng);

  // pristine landscape: ratio 1, service 1
  CHECK(land.ecosystem_service(p) == doctest::Approx(1.0).epsilon(1e-12));

  // converting half the natural pool halves the integrity sum
  Rng op(5);
  land.convert_cells(LandUse::crop, 50, op);
  CHECK(land.ecosystem_service(p) ==
        doctest::Approx(std::pow(0.5, 0.25)).epsilon(1e-12));
  CHECK(land.ecosystem_service(p) == doctest::Approx(0.8408964153).epsilon(1e-9));

  // a flat exponent turns the service off
  ModelParams flat = p;
  flat.service_exponent = 0.0;
  CHECK(land.ecosystem_service(flat) == doctest::Approx(1.0).epsilon(1e-12));

  // other exponents follow the same power law
  ModelParams half = p;
  half.service_exponent = 0.5;
  CHECK(land.ecosystem_service(half) ==
        doctest::Approx(std::pow(0.5, 0.5)).epsilon(1e-12));

  // service tracks the metrics-reported natural integrity sum
  const LandscapeMetrics m = land.metrics(p);
  CHECK(land.ecosystem_service(p) ==
        doctest::Approx(std::pow(m.natural_eps_sum / land.initial_natural_eps_sum(),
                                 p.service_exponent))
            .epsilon(1e-12));
}

TEST_CASE("conventional cropland loses integrity from mechanization plus chemicals") {
  const ModelParams p = exact_params(0.0, 1.0, 0.0);
  Rng rng(6);
  Landscape land = Landscape::initialize(p, rng);

  // theta 1e-4, inputs 1+1, service 1: every cell drops to 0.9998 exactly
  const int events = land.update_integrity({1.0, 1.0, 1.0, 1.0}, p);
  CHECK(events == 0);
  const double expect = 1.0 - (1.0 / 10000.0) * 2.0 / 1.0;
  for (const Cell& c : land.cells()) {
    CHECK(c.eps == doctest::Approx(expect).epsilon(1e-15));
    CHECK(c.eps == doctest::Approx(0.9998).epsilon(1e-12));
  }

  // a second year compounds multiplicatively
  land.update_integrity({1.0, 1.0, 1.0, 1.0}, p);
  for (const Cell& c : land.cells()) {
    CHECK(c.eps == doctest::Approx(expect * expect).epsilon(1e-14));
  }
}

TEST_CASE("integrity pressure oracle table for agricultural land") {
  struct Row {
    double median;  // lifespan median = 1/theta
    double mech, chem, stock, service;
  };
  // conventional cropland: factor = 1 - theta * (mech + chem) / service
  const Row crop_rows[] = {{10000.0, 1.0, 1.0, 1.0, 1.0},
                           {10000.0, 2.0, 3.0, 1.0, 1.0},
                           {2000.0, 1.0, 2.0, 1.0, 0.5},
                           {500.0, 4.0, 4.0, 1.0, 2.0},
                           {100.0, 1.0, 1.0, 1.0, 0.8}};
  for (const Row& r : crop_rows) {
    ModelParams p = exact_params(0.0, 1.0, 0.0);
    p.lifespan_median_crop = r.median;
    Rng rng(11);
    Landscape land = Landscape::initialize(p, rng);
    land.update_integrity({r.mech, r.chem, r.stock, r.service}, p);
    const double expect =
        std::max(p.eps_min, 1.0 - (1.0 / r.median) * (r.mech + r.chem) / r.service);
    for (const Cell& c : land.cells()) {
      CHECK(c.eps == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  // pasture: factor = 1 - theta * stock / service
  const Row pasture_rows[] = {{5000.0, 1.0, 1.0, 2.0, 1.0},
                              {5000.0, 1.0, 1.0, 1.0, 1.0},
                              {1000.0, 1.0, 1.0, 3.0, 0.5},
                              {250.0, 1.0, 1.0, 2.5, 2.0},
                              {50.0, 1.0, 1.0, 10.0, 1.0}};
  for (const Row& r : pasture_rows) {
    ModelParams p = exact_params(0.0, 0.0, 1.0);
    p.lifespan_median_pasture = r.median;
    Rng rng(12);
    Landscape land = Landscape::initialize(p, rng);
    land.update_integrity({r.mech, r.chem, r.stock, r.service}, p);
    const double raw = 1.0 - (1.0 / r.median) * r.stock / r.service;
    const double expect = raw <= 0.0 ? p.eps_min : std::max(p.eps_min, raw);
    for (const Cell& c : land.cells()) {
      CHECK(c.eps == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("organic cropland is exempt from the chemical term by default") {
  ModelParams p = exact_params(0.0, 1.0, 0.0);
  Rng rng(13);
  Landscape land = Landscape::initialize(p, rng);
  Rng op(14);
  land.set_organic_share(0.5, 0.0, op);

  land.update_integrity({1.0, 4.0, 1.0, 1.0}, p);
  const double conv_expect = 1.0 - 1e-4 * (1.0 + 4.0);
  const double org_expect = 1.0 - 1e-4 * 1.0;
  for (const Cell& c : land.cells()) {
    const double expect = c.mgmt == Management::organic ? org_expect : conv_expect;
    CHECK(c.eps == doctest::Approx(expect).epsilon(1e-12));
  }

  // switching the exemption off makes organic degrade like conventional
  ModelParams no_exempt = p;
  no_exempt.organic_crop_phi_exempt = false;
  Rng rng2(13);
  Landscape land2 = Landscape::initialize(no_exempt, rng2);
  Rng op2(14);
  land2.set_organic_share(0.5, 0.0, op2);
  land2.update_integrity({1.0, 4.0, 1.0, 1.0}, no_exempt);
  for (const Cell& c : land2.cells()) {
    CHECK(c.eps == doctest::Approx(conv_expect).epsilon(1e-12));
  }
}

TEST_CASE("organic pasture degrades with the capped stocking density") {
  ModelParams p = exact_params(0.0, 0.0, 1.0);
  Rng rng(15);
  Landscape land = Landscape::initialize(p, rng);
  Rng op(16);
  land.set_organic_share(0.0, 0.4, op);

  // density 5 acts as 3 on organic cells (the ceiling), 5 on conventional
  land.update_integrity({1.0, 1.0, 5.0, 1.0}, p);
  const double conv_expect = 1.0 - (1.0 / 5000.0) * 5.0;
  const double org_expect = 1.0 - (1.0 / 5000.0) * 3.0;
  for (const Cell& c : land.cells()) {
    const double expect = c.mgmt == Management::organic ? org_expect : conv_expect;
    CHECK(c.eps == doctest::Approx(expect).epsilon(1e-12));
  }

  // with the cap disabled both classes degrade alike
  ModelParams uncapped = p;
  uncapped.organic_lambda_cap = false;
  Rng rng2(15);
  Landscape land2 = Landscape::initialize(uncapped, rng2);
  Rng op2(16);
  land2.set_organic_share(0.0, 0.4, op2);
  land2.update_integrity({1.0, 1.0, 5.0, 1.0}, uncapped);
  for (const Cell& c : land2.cells()) {
    CHECK(c.eps == doctest::Approx(conv_expect).epsilon(1e-12));
  }
}

TEST_CASE("natural land recovers logistically toward the ceiling") {
  // pristine natural cells sit at the fixed point
  ModelParams p = exact_params(1.0, 0.0, 0.0);
  Rng rng(17);
  Landscape land = Landscape::initialize(p, rng);
  land.update_integrity({1.0, 1.0, 1.0, 1.0}, p);
  for (const Cell& c : land.cells()) CHECK(c.eps == p.eps_max);

  // an abandoned cell at integrity 1 grows by theta * E * (1 - eps/eps_max)
  ModelParams mixed = exact_params(0.0, 1.0, 0.0);
  Rng rng2(18);
  Landscape land2 = Landscape::initialize(mixed, rng2);
  Rng op(19);
  land2.abandon_cells(LandUse::crop, 100, op);  // all crop cells become natural at eps 1
  CHECK(land2.area(LandUse::natural) == 100);

  land2.update_integrity({1.0, 1.0, 1.0, 1.0}, mixed);
  const double expect = 1.0 * (1.0 + (1.0 / 1000.0) * 1.0 * (1.0 - 1.0 / 2.0));
  for (const Cell& c : land2.cells()) {
    CHECK(c.eps == doctest::Approx(expect).epsilon(1e-15));
    CHECK(c.eps == doctest::Approx(1.0005).epsilon(1e-12));
  }

  // the literal response flips the sign
  ModelParams literal = mixed;
  literal.natural_sign = NaturalSign::literal;
  Rng rng3(18);
  Landscape land3 = Landscape::initialize(literal, rng3);
  Rng op3(19);
  land3.abandon_cells(LandUse::crop, 100, op3);
  land3.update_integrity({1.0, 1.0, 1.0, 1.0}, literal);
  for (const Cell& c : land3.cells()) {
    CHECK(c.eps == doctest::Approx(0.9995).epsilon(1e-12));
  }
}

TEST_CASE("natural recovery is clamped at the integrity ceiling") {
  // a very fast recovery rate overshoots in one step and is capped
  ModelParams p = exact_params(0.0, 1.0, 0.0);
  p.lifespan_median_natural = 1.0 / 3.0;  // recovery rate 3 per year
  Rng rng(20);
  Landscape land = Landscape::initialize(p, rng);
  Rng op(21);
  land.abandon_cells(LandUse::crop, 100, op);
  land.update_integrity({1.0, 1.0, 1.0, 1.0}, p);
  // raw update: 1 * (1 + 3 * 0.5) = 2.5, clamped to eps_max
  for (const Cell& c : land.cells()) CHECK(c.eps == p.eps_max);
}

TEST_CASE("non-positive multipliers clamp to the floor and are counted") {
  ModelParams p = exact_params(0.0, 0.0, 1.0);
  Rng rng(22);
  Landscape land = Landscape::initialize(p, rng);

  // theta 2e-4, stock 10000: factor 1 - 2 < 0 on every pasture cell
  const int events = land.update_integrity({1.0, 1.0, 10000.0, 1.0}, p);
  CHECK(events == 100);
  for (const Cell& c : land.cells()) CHECK(c.eps == p.eps_min);

  // saturated cells stay at the floor under further pressure
  const int again = land.update_integrity({1.0, 1.0, 10000.0, 1.0}, p);
  CHECK(again == 100);
  for (const Cell& c : land.cells()) CHECK(c.eps == p.eps_min);
}

TEST_CASE("update_integrity requires a positive service level") {
  ModelParams p = exact_params(0.0, 1.0, 0.0);
  Rng rng(23);
  Landscape land = Landscape::initialize(p, rng);
  CHECK_THROWS_AS(land.update_integrity({1.0, 1.0, 1.0, 0.0}, p), ModelError);
  CHECK_THROWS_AS(land.update_integrity({1.0, 1.0, 1.0, -1.0}, p), ModelError);
}

TEST_CASE("conversion picks the most intact natural cells and caps their integrity") {
  ModelParams p = exact_params(1.0, 0.0, 0.0);
  Rng rng(24);
  Landscape land = Landscape::initialize(p, rng);
  Rng op(25);

  // first conversion: pristine cells at 2.0 enter agricultural use at 1.0
  int done = land.convert_cells(LandUse::crop, 30, op);
  CHECK(done == 30);
  CHECK(land.area(LandUse::crop) == 30);
  CHECK(land.area(LandUse::natural) == 70);
  for (const Cell& c : land.cells()) {
    if (c.use == LandUse::crop) {
      CHECK(c.eps == 1.0);
      CHECK(c.mgmt == Management::conventional);
    }
  }
  land.check_consistency();

  // degrade the cropland, then abandon a few cells to build a mixed pool:
  // 70 pristine naturals at 2.0 plus 5 recovering naturals below 1
  land.update_integrity({1.0, 1.0, 1.0, 1.0}, p);
  land.abandon_cells(LandUse::crop, 5, op);
  const int low_before =
      (int)std::count_if(land.cells().begin(), land.cells().end(), [](const Cell& c) {
        return c.use == LandUse::natural && c.eps < 1.5;
      });
  CHECK(low_before == 5);

  // conversion must exhaust the pristine cells before touching the low ones
  done = land.convert_cells(LandUse::crop, 60, op);
  CHECK(done == 60);
  const int low_after =
      (int)std::count_if(land.cells().begin(), land.cells().end(), [](const Cell& c) {
        return c.use == LandUse::natural && c.eps < 1.5;
      });
  CHECK(low_after == 5);
  CHECK(land.area(LandUse::natural) == 15);
  land.check_consistency();
}

TEST_CASE("conversion clamps at the available natural pool") {
  ModelParams p = exact_params(0.5, 0.5, 0.0);
  Rng rng(26);
  Landscape land = Landscape::initialize(p, rng);
  Rng op(27);

  const int done = land.convert_cells(LandUse::pasture, 200, op);
  CHECK(done == 50);
  CHECK(land.area(LandUse::natural) == 0);
  CHECK(land.area(LandUse::pasture) == 50);

  // with the natural pool gone the service degenerates to the floor ratio:
  // (eps_min / initial sum)^p = (1e-6 / 100)^0.25 = 0.01
  CHECK(land.ecosystem_service(p) == doctest::Approx(0.01).epsilon(1e-9));

  // nothing left to convert
  CHECK(land.convert_cells(LandUse::crop, 10, op) == 0);
  CHECK(land.convert_cells(LandUse::crop, 0, op) == 0);
  CHECK_THROWS_AS(land.convert_cells(LandUse::natural, 1, op), ModelError);
  CHECK_THROWS_AS(land.convert_cells(LandUse::crop, -1, op), ModelError);
}

TEST_CASE("abandonment releases the most degraded cells and keeps their integrity") {
  ModelParams p = exact_params(0.0, 1.0, 0.0);
  Rng rng(28);
  Landscape land = Landscape::initialize(p, rng);
  Rng op(29);

  // mark 30 cells organic so one year of pressure splits the eps levels:
  // conventional 0.9998 < organic 0.9999
  land.set_organic_share(0.3, 0.0, op);
  land.update_integrity({1.0, 1.0, 1.0, 1.0}, p);
  const double conv_eps = 1.0 - 1e-4 * 2.0;
  const double org_eps = 1.0 - 1e-4 * 1.0;

  // the 70 conventional cells are strictly worse and must all go first
  const int done = land.abandon_cells(LandUse::crop, 70, op);
  CHECK(done == 70);
  CHECK(land.area(LandUse::natural) == 70);
  CHECK(land.organic_count(LandUse::crop) == 30);
  for (const Cell& c : land.cells()) {
    if (c.use == LandUse::natural) {
      // abandoned land starts recovery from its degraded state
      CHECK(c.eps == doctest::Approx(conv_eps).epsilon(1e-12));
      CHECK(c.mgmt == Management::conventional);
    } else {
      CHECK(c.mgmt == Management::organic);
      CHECK(c.eps == doctest::Approx(org_eps).epsilon(1e-12));
    }
  }
  land.check_consistency();

  // abandoning organic cells maintains the organic ledger
  const int more = land.abandon_cells(LandUse::crop, 10, op);
  CHECK(more == 10);
  CHECK(land.organic_count(LandUse::crop) == 20);
  land.check_consistency();

  CHECK_THROWS_AS(land.abandon_cells(LandUse::natural, 1, op), ModelError);
  CHECK_THROWS_AS(land.abandon_cells(LandUse::crop, -1, op), ModelError);

  // requesting more than the class holds abandons everything
  const int rest = land.abandon_cells(LandUse::crop, 100, op);
  CHECK(rest == 20);
  CHECK(land.area(LandUse::crop) == 0);
  CHECK(land.organic_count(LandUse::crop) == 0);
}

TEST_CASE("organic promotion reaches the rounded target and never demotes") {
  const ModelParams p;  // 100x100 defaults
  Rng rng(30);
  Landscape land = Landscape::initialize(p, rng);
  Rng op(31);

  land.set_organic_share(0.10, 0.0, op);
  CHECK(land.organic_count(LandUse::crop) == 150);  // round(0.10 * 1500)
  CHECK(land.organic_count(LandUse::pasture) == 0);

  // a lower request keeps the existing organic stock
  land.set_organic_share(0.05, 0.0, op);
  CHECK(land.organic_count(LandUse::crop) == 150);

  // a higher request promotes the difference, on both classes
  land.set_organic_share(0.20, 0.10, op);
  CHECK(land.organic_count(LandUse::crop) == 300);
  CHECK(land.organic_count(LandUse::pasture) == 350);
  land.check_consistency();

  CHECK_THROWS_AS(land.set_organic_share(-0.1, 0.0, op), ModelError);
  CHECK_THROWS_AS(land.set_organic_share(0.0, 1.1, op), ModelError);
}

TEST_CASE("organic promotion rounds half away from zero") {
  ModelParams p = exact_params(0.0, 1.0, 0.0);
  Rng rng(32);
  Landscape land = Landscape::initialize(p, rng);
  Rng op(33);
  land.set_organic_share(0.125, 0.0, op);  // round(12.5) = 13
  CHECK(land.organic_count(LandUse::crop) == 13);
}

TEST_CASE("forest classification uses a strict threshold") {
  // grow an abandoned cell to a mid-range integrity and pin the threshold
  // exactly on the stored value: strictly-above is required to count
  ModelParams p = exact_params(0.0, 1.0, 0.0);
  p.lifespan_median_natural = 2.0;  // recovery rate 0.5
  Rng rng(34);
  Landscape land = Landscape::initialize(p, rng);
  Rng op(35);
  land.abandon_cells(LandUse::crop, 100, op);
  land.update_integrity({1.0, 1.0, 1.0, 1.0}, p);  // eps 1.25
  land.update_integrity({1.0, 1.0, 1.0, 1.0}, p);  // eps ~1.48

  const double eps = land.cell(0).eps;
  CHECK(eps > 1.0);
  CHECK(eps < 2.0);

  ModelParams at = p;
  at.forest_threshold = eps;  // cells sit exactly on the threshold
  CHECK(land.metrics(at).area_forest == 0);

  ModelParams below = p;
  below.forest_threshold = std::nextafter(eps, 1.0);
  CHECK(land.metrics(below).area_forest == 100);
}

TEST_CASE("degradation classification uses a strict threshold") {
  ModelParams p = exact_params(0.0, 0.0, 1.0);
  Rng rng(36);
  Landscape land = Landscape::initialize(p, rng);
  // saturate everything to the integrity floor
  land.update_integrity({1.0, 1.0, 10000.0, 1.0}, p);

  ModelParams at = p;
  at.degraded_threshold = p.eps_min;  // cells sit exactly on the threshold
  CHECK(land.metrics(at).area_degraded == 0);

  ModelParams above = p;
  above.degraded_threshold = std::nextafter(p.eps_min, 1.0);
  CHECK(land.metrics(above).area_degraded == 100);
}

TEST_CASE("degraded land is counted across every land use") {
  ModelParams p = exact_params(0.4, 0.3, 0.3);
  p.lifespan_median_crop = 2.0;  // rates high enough to saturate in one year
  p.lifespan_median_pasture = 2.0;
  Rng rng(37);
  Landscape land = Landscape::initialize(p, rng);

  // naturals start at the ceiling where the decay term vanishes; degrade the
  // agricultural cells only and check the class split of the degraded count
  land.update_integrity({2.0, 2.0, 4.0, 1.0}, p);
  const LandscapeMetrics m = land.metrics(p);
  CHECK(m.area_degraded == 60);  // every crop and pasture cell, no natural
  CHECK(m.area_natural == 40);
}

TEST_CASE("subset means in metrics are consistent with the cell population") {
  const ModelParams p;
  Rng rng(38);
  Landscape land = Landscape::initialize(p, rng);
  Rng op(39);
  land.set_organic_share(0.2, 0.1, op);
  land.update_integrity({1.2, 1.4, 1.6, 0.9}, p);

  const LandscapeMetrics m = land.metrics(p);
  double sum_cc = 0;
  int n_cc = 0;
  for (const Cell& c : land.cells()) {
    if (c.use == LandUse::crop && c.mgmt == Management::conventional) {
      sum_cc += c.eps;
      ++n_cc;
    }
  }
  CHECK(m.area_crop - m.crop_organic == n_cc);
  CHECK(m.mean_eps_crop_conv == doctest::Approx(sum_cc / n_cc).epsilon(1e-12));
  CHECK(m.area_natural + m.area_crop + m.area_pasture == land.size());
}
