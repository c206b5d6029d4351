#include "foodland/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "foodland/errors.hpp"

namespace foodland {

namespace {

// Separable Gaussian blur on a torus, in place, one axis at a time.
void blur_axis(std::vector<double>& field, int w, int h, bool rows,
               const std::vector<double>& kernel) {
  const int radius = (int)kernel.size() - 1;
  std::vector<double> line;
  const int n_lines = rows ? h : w;
  const int len = rows ? w : h;
  line.resize(len);
  for (int l = 0; l < n_lines; ++l) {
    for (int i = 0; i < len; ++i) {
      line[i] = rows ? field[l * w + i] : field[i * w + l];
    }
    for (int i = 0; i < len; ++i) {
      double acc = line[i] * kernel[0];
      for (int j = 1; j <= radius; ++j) {
        acc += kernel[j] * (line[(i + j) % len] + line[(i - j + len) % len]);
      }
      if (rows) {
        field[l * w + i] = acc;
      } else {
        field[i * w + l] = acc;
      }
    }
  }
}

}  // namespace

std::vector<char> correlated_mask(int w, int h, double xi, double fraction, Rng& rng) {
  if (w <= 0 || h <= 0) throw ConfigError("correlated_mask: grid dimensions must be positive");
  if (fraction < 0.0 || fraction > 1.0) {
    throw ConfigError("correlated_mask: fraction must lie in [0, 1]");
  }
  const int n = w * h;
  std::vector<double> field(n);
  for (double& v : field) v = normal01(rng);

  // kernel sd xi/2 puts the autocorrelation e-folding distance near xi
  const double sigma = xi / 2.0;
  int radius = (int)std::ceil(3.0 * sigma);
  radius = std::min(radius, std::min(w, h) - 1);
  std::vector<double> kernel(radius + 1);
  double norm = 0.0;
  for (int j = 0; j <= radius; ++j) {
    kernel[j] = std::exp(-0.5 * (j / sigma) * (j / sigma));
    norm += (j == 0 ? 1.0 : 2.0) * kernel[j];
  }
  for (double& k : kernel) k /= norm;
  blur_axis(field, w, h, true, kernel);
  blur_axis(field, w, h, false, kernel);

  const int count = (int)std::lround(fraction * n);
  std::vector<std::pair<double, int>> order(n);
  for (int i = 0; i < n; ++i) order[i] = {field[i], i};
  // deterministic total order; ties in the continuous field are measure-zero
  auto higher = [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  if (count > 0 && count < n) {
    std::nth_element(order.begin(), order.begin() + (count - 1), order.end(), higher);
  }
  std::vector<char> mask(n, 0);
  for (int i = 0; i < count; ++i) mask[order[i].second] = 1;
  return mask;
}

Landscape Landscape::initialize(const ModelParams& params, Rng& rng) {
  params.validate();
  Landscape land;
  land.w_ = params.grid_width;
  land.h_ = params.grid_height;
  const int n = land.w_ * land.h_;
  land.cells_.resize(n);
  land.scratch_.reserve(n);

  // RNG consumption order is pinned: natural mask, pasture/crop shuffle,
  // then per-cell rates in cell index order.
  auto mask = correlated_mask(land.w_, land.h_, params.correlation_length,
                              params.share_natural, rng);

  std::vector<int> open;
  open.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (!mask[i]) open.push_back(i);
  }
  int n_pasture = (int)std::lround(params.share_pasture * n);
  n_pasture = std::min(n_pasture, (int)open.size());
  shuffle_pinned(open, rng);

  for (int i = 0; i < n; ++i) {
    land.cells_[i].use = LandUse::natural;
    land.cells_[i].mgmt = Management::conventional;
  }
  for (std::size_t j = 0; j < open.size(); ++j) {
    land.cells_[open[j]].use = j < (std::size_t)n_pasture ? LandUse::pasture : LandUse::crop;
  }

  for (int i = 0; i < n; ++i) {
    Cell& c = land.cells_[i];
    c.theta_natural =
        1.0 / lognormal_median(rng, params.lifespan_median_natural, params.lifespan_log_sd_natural);
    c.theta_crop =
        1.0 / lognormal_median(rng, params.lifespan_median_crop, params.lifespan_log_sd_crop);
    c.theta_pasture =
        1.0 / lognormal_median(rng, params.lifespan_median_pasture, params.lifespan_log_sd_pasture);
    c.eps = c.use == LandUse::natural ? params.eps_max : 1.0;
  }

  land.area_ = {0, 0, 0};
  land.organic_ = {0, 0, 0};
  for (const Cell& c : land.cells_) land.area_[(int)c.use]++;
  land.eps0_natural_sum_ = land.area_[(int)LandUse::natural] * params.eps_max;
  return land;
}

int Landscape::convert_cells(LandUse target, int count, Rng& rng) {
  if (target == LandUse::natural) throw ModelError("convert_cells: target must be agricultural");
  if (count < 0) throw ModelError("convert_cells: negative count");
  if (count == 0) return 0;

  scratch_.clear();
  for (int i = 0; i < (int)cells_.size(); ++i) {
    if (cells_[i].use == LandUse::natural) scratch_.emplace_back(cells_[i].eps, i);
  }
  const int take = std::min<int>(count, (int)scratch_.size());
  if (take == 0) return 0;

  if (take < (int)scratch_.size()) {
    std::nth_element(scratch_.begin(), scratch_.begin() + (take - 1), scratch_.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    const double pivot = scratch_[take - 1].first;
    // everything strictly above the pivot is in; the pivot's tie group fills
    // the remaining slots uniformly at random
    std::vector<int> sure, ties;
    for (const auto& [eps, idx] : scratch_) {
      if (eps > pivot) {
        sure.push_back(idx);
      } else if (eps == pivot) {
        ties.push_back(idx);
      }
    }
    std::sort(sure.begin(), sure.end());
    std::sort(ties.begin(), ties.end());
    int need = take - (int)sure.size();
    for (int j = 0; j < need; ++j) {
      std::size_t pick = j + uniform_below(rng, ties.size() - j);
      std::swap(ties[j], ties[pick]);
    }
    sure.insert(sure.end(), ties.begin(), ties.begin() + need);
    for (int idx : sure) {
      Cell& c = cells_[idx];
      c.use = target;
      c.mgmt = Management::conventional;
      c.eps = std::min(c.eps, 1.0);
    }
  } else {
    for (const auto& [eps, idx] : scratch_) {
      Cell& c = cells_[idx];
      c.use = target;
      c.mgmt = Management::conventional;
      c.eps = std::min(c.eps, 1.0);
    }
  }
  area_[(int)LandUse::natural] -= take;
  area_[(int)target] += take;
  return take;
}

int Landscape::abandon_cells(LandUse from, int count, Rng& rng) {
  if (from == LandUse::natural) throw ModelError("abandon_cells: source must be agricultural");
  if (count < 0) throw ModelError("abandon_cells: negative count");
  if (count == 0) return 0;

  scratch_.clear();
  for (int i = 0; i < (int)cells_.size(); ++i) {
    if (cells_[i].use == from) scratch_.emplace_back(cells_[i].eps, i);
  }
  const int take = std::min<int>(count, (int)scratch_.size());
  if (take == 0) return 0;

  std::vector<int> chosen;
  if (take < (int)scratch_.size()) {
    std::nth_element(scratch_.begin(), scratch_.begin() + (take - 1), scratch_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    const double pivot = scratch_[take - 1].first;
    std::vector<int> ties;
    for (const auto& [eps, idx] : scratch_) {
      if (eps < pivot) {
        chosen.push_back(idx);
      } else if (eps == pivot) {
        ties.push_back(idx);
      }
    }
    std::sort(chosen.begin(), chosen.end());
    std::sort(ties.begin(), ties.end());
    int need = take - (int)chosen.size();
    for (int j = 0; j < need; ++j) {
      std::size_t pick = j + uniform_below(rng, ties.size() - j);
      std::swap(ties[j], ties[pick]);
    }
    chosen.insert(chosen.end(), ties.begin(), ties.begin() + need);
  } else {
    for (const auto& [eps, idx] : scratch_) chosen.push_back(idx);
  }
  for (int idx : chosen) {
    Cell& c = cells_[idx];
    if (c.mgmt == Management::organic) organic_[(int)from]--;
    c.use = LandUse::natural;
    c.mgmt = Management::conventional;
    // eps carries over: abandoned land starts recovery from its degraded state
  }
  area_[(int)from] -= take;
  area_[(int)LandUse::natural] += take;
  return take;
}

void Landscape::set_organic_share(double share_crop, double share_pasture, Rng& rng) {
  if (share_crop < 0 || share_crop > 1 || share_pasture < 0 || share_pasture > 1) {
    throw ModelError("set_organic_share: shares must lie in [0, 1]");
  }
  const LandUse classes[2] = {LandUse::crop, LandUse::pasture};
  const double shares[2] = {share_crop, share_pasture};
  for (int ci = 0; ci < 2; ++ci) {
    const LandUse u = classes[ci];
    const int target = (int)std::lround(shares[ci] * area_[(int)u]);
    int deficit = target - organic_[(int)u];
    if (deficit <= 0) continue;  // promote-only; surplus after shrinkage stays
    std::vector<int> conv;
    for (int i = 0; i < (int)cells_.size(); ++i) {
      if (cells_[i].use == u && cells_[i].mgmt == Management::conventional) {
        conv.push_back(i);
      }
    }
    deficit = std::min<int>(deficit, (int)conv.size());
    for (int j = 0; j < deficit; ++j) {
      std::size_t pick = j + uniform_below(rng, conv.size() - j);
      std::swap(conv[j], conv[pick]);
      cells_[conv[j]].mgmt = Management::organic;
    }
    organic_[(int)u] += deficit;
  }
}

int Landscape::update_integrity(const IntegrityPressure& pr, const ModelParams& params) {
  if (!(pr.service > 0.0)) throw ModelError("update_integrity: ecosystem service must be positive");
  int saturation_events = 0;
  const bool growth = params.natural_sign == NaturalSign::growth;
  for (Cell& c : cells_) {
    double factor;
    switch (c.use) {
      case LandUse::natural: {
        const double pull = c.theta_natural * pr.service * (1.0 - c.eps / params.eps_max);
        factor = growth ? 1.0 + pull : 1.0 - pull;
        break;
      }
      case LandUse::crop: {
        double inputs = pr.mech;
        if (!(c.mgmt == Management::organic && params.organic_crop_phi_exempt)) {
          inputs += pr.chem;
        }
        factor = 1.0 - c.theta_crop * inputs / pr.service;
        break;
      }
      case LandUse::pasture: {
        double density = pr.stock;
        if (c.mgmt == Management::organic && params.organic_lambda_cap) {
          density = std::min(params.stock_cap_organic, density);
        }
        factor = 1.0 - c.theta_pasture * density / pr.service;
        break;
      }
      default:
        throw ModelError("update_integrity: corrupt land use");
    }
    if (factor <= 0.0) {
      c.eps = params.eps_min;
      ++saturation_events;
      continue;
    }
    c.eps *= factor;
    const double cap = c.use == LandUse::natural ? params.eps_max : 1.0;
    if (c.eps > cap) c.eps = cap;
    if (c.eps < params.eps_min) c.eps = params.eps_min;
  }
  return saturation_events;
}

double Landscape::ecosystem_service(const ModelParams& params) const {
  double sum = 0.0;
  if (area_[(int)LandUse::natural] == 0) {
    sum = params.eps_min;
  } else {
    for (const Cell& c : cells_) {
      if (c.use == LandUse::natural) sum += c.eps;
    }
  }
  return std::pow(sum / eps0_natural_sum_, params.service_exponent);
}

LandscapeMetrics Landscape::metrics(const ModelParams& params) const {
  LandscapeMetrics m;
  double sum_nat = 0, sum_cc = 0, sum_co = 0, sum_pc = 0, sum_po = 0;
  int n_cc = 0, n_co = 0, n_pc = 0, n_po = 0;
  for (const Cell& c : cells_) {
    if (c.eps < params.degraded_threshold) m.area_degraded++;
    switch (c.use) {
      case LandUse::natural:
        m.area_natural++;
        sum_nat += c.eps;
        if (c.eps > params.forest_threshold) m.area_forest++;
        break;
      case LandUse::crop:
        m.area_crop++;
        if (c.mgmt == Management::organic) {
          sum_co += c.eps;
          ++n_co;
        } else {
          sum_cc += c.eps;
          ++n_cc;
        }
        break;
      case LandUse::pasture:
        m.area_pasture++;
        if (c.mgmt == Management::organic) {
          sum_po += c.eps;
          ++n_po;
        } else {
          sum_pc += c.eps;
          ++n_pc;
        }
        break;
    }
  }
  const double nan = std::nan("");
  m.crop_organic = n_co;
  m.pasture_organic = n_po;
  m.mean_eps_natural = m.area_natural ? sum_nat / m.area_natural : nan;
  m.mean_eps_crop_conv = n_cc ? sum_cc / n_cc : nan;
  m.mean_eps_crop_org = n_co ? sum_co / n_co : nan;
  m.mean_eps_pasture_conv = n_pc ? sum_pc / n_pc : nan;
  m.mean_eps_pasture_org = n_po ? sum_po / n_po : nan;
  m.natural_eps_sum = sum_nat;
  return m;
}

void Landscape::check_consistency() const {
  std::array<int, 3> areas{};
  std::array<int, 3> organics{};
  for (const Cell& c : cells_) {
    areas[(int)c.use]++;
    if (c.use != LandUse::natural && c.mgmt == Management::organic) organics[(int)c.use]++;
  }
  for (int u = 0; u < 3; ++u) {
    if (areas[u] != area_[u]) {
      throw ModelError("landscape cache mismatch: area[" + std::to_string(u) + "] cached " +
                       std::to_string(area_[u]) + " actual " + std::to_string(areas[u]));
    }
    if (u != (int)LandUse::natural && organics[u] != organic_[u]) {
      throw ModelError("landscape cache mismatch: organic[" + std::to_string(u) + "] cached " +
                       std::to_string(organic_[u]) + " actual " + std::to_string(organics[u]));
    }
  }
  if (areas[0] + areas[1] + areas[2] != (int)cells_.size()) {
    throw ModelError("landscape cache mismatch: areas do not cover the grid");
  }
}

}  // namespace foodland
