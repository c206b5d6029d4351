#include "foodland/production.hpp"

#include <algorithm>
#include <cmath>

#include "foodland/errors.hpp"

namespace foodland {

namespace {

double checked_mean(double area, double mean_eps, const char* what) {
  if (std::isnan(mean_eps) || !(mean_eps > 0)) {
    throw ModelError(std::string(what) + ": non-empty class needs a positive mean integrity");
  }
  if (!(area > 0)) throw ModelError(std::string(what) + ": area must be positive here");
  return mean_eps;
}

}  // namespace

double crop_output_conventional(double area, double tech, double chem, double mech,
                                double mean_eps, double chem_exp, double mech_exp) {
  if (area == 0.0) return 0.0;
  checked_mean(area, mean_eps, "crop_output_conventional");
  const double eps_exp = 1.0 - chem_exp - mech_exp;
  return area * (1.0 + tech) * std::pow(chem, chem_exp) * std::pow(mech, mech_exp) *
         std::pow(mean_eps, eps_exp);
}

double crop_output_organic(double area, double tech, double mech, double mean_eps,
                           double chem_exp, double mech_exp) {
  if (area == 0.0) return 0.0;
  checked_mean(area, mean_eps, "crop_output_organic");
  const double eps_exp = 1.0 - chem_exp - mech_exp;
  return area * (1.0 + tech) * std::pow(mech, mech_exp) * std::pow(mean_eps, eps_exp);
}

double meat_output_conventional(double area, double tech, double stock, double mean_eps,
                                double stock_exp) {
  if (area == 0.0) return 0.0;
  checked_mean(area, mean_eps, "meat_output_conventional");
  return area * (1.0 + tech) * std::pow(stock, stock_exp) *
         std::pow(mean_eps, 1.0 - stock_exp);
}

double meat_output_organic(double area, double tech, double stock, double stock_cap,
                           double mean_eps, double stock_exp) {
  if (area == 0.0) return 0.0;
  checked_mean(area, mean_eps, "meat_output_organic");
  const double density = std::min(stock_cap, stock);
  return area * (1.0 + tech) * std::pow(density, stock_exp) *
         std::pow(mean_eps, 1.0 - stock_exp);
}

double feed_demand(double feed_coeff, double planned_meat) {
  if (feed_coeff < 0 || planned_meat < 0) throw ModelError("feed_demand: negative argument");
  return feed_coeff * planned_meat;
}

double feed_scaling(double crop_output, double crop_food_demand, double feed) {
  const double need = crop_food_demand + feed;
  if (!(need > 0)) return 1.0;
  return std::min(1.0, crop_output / need);
}

double advance_technology(double tech, double rate, double cap) {
  if (!(tech >= 0)) throw ModelError("advance_technology: negative level");
  return tech + rate * tech * (1.0 - tech / cap);
}

InputLevels update_inputs(const InputLevels& in, double crop_demand, double crop_output_prev,
                          double meat_demand, double meat_output_prev, double mech_rate,
                          double chem_rate, double stock_rate) {
  if (!(crop_demand > 0) || !(meat_demand > 0)) {
    throw ModelError("update_inputs: demands must be positive");
  }
  const double crop_gap = (crop_demand - crop_output_prev) / crop_demand;
  const double meat_gap = (meat_demand - meat_output_prev) / meat_demand;
  InputLevels out = in;
  out.mech = std::max(1.0, in.mech + mech_rate * in.mech * crop_gap);
  out.chem = std::max(1.0, in.chem + chem_rate * in.chem * crop_gap);
  out.stock = std::max(1.0, in.stock + stock_rate * in.stock * meat_gap);
  return out;
}

LandMove land_response(double demand, double output_prev, double gain_expand,
                       double gain_contract, double churn_fraction, int total_cells,
                       LandFloorMode mode) {
  if (!(demand > 0)) throw ModelError("land_response: demand must be positive");
  if (total_cells <= 0) throw ModelError("land_response: grid must be non-empty");
  const double gap = (demand - output_prev) / demand;
  LandMove mv;
  if (mode == LandFloorMode::quantum) {
    const long quantum = std::lround(churn_fraction * total_cells);
    const double me = std::floor(1.0 + gain_expand * gap);
    const double mc = std::floor(1.0 + gain_contract * -gap);
    mv.expand_cells = (int)(quantum * std::max(0L, (long)me));
    mv.contract_cells = (int)(quantum * std::max(0L, (long)mc));
  } else {
    const double e = std::floor(churn_fraction * (1.0 + gain_expand * gap) * total_cells);
    const double c = std::floor(churn_fraction * (1.0 + gain_contract * -gap) * total_cells);
    mv.expand_cells = (int)std::max(0.0, e);
    mv.contract_cells = (int)std::max(0.0, c);
  }
  return mv;
}

}  // namespace foodland
