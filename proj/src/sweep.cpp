#include "bussgang/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

namespace bussgang {

namespace {

SweepRow evaluate_row(const MidRiseQuantizer& q, const SignalDistribution& signal, double sigma_n,
                      const QuadratureSpec& spec) {
  SweepRow row;
  row.delta = q.delta();
  try {
    const auto cs = s_referenced_coefficients(q, signal, sigma_n, spec);
    row.alpha_s = cs.alpha;
    row.gamma_s = cs.gamma;
    const auto rep = sdnr_noisy(cs);
    row.sdnr_linear = rep.sdnr_linear;
    row.sdnr_db = rep.sdnr_db;
  } catch (const DomainError&) {
    row.ok = false;
    row.alpha_s = row.gamma_s = row.sdnr_linear = row.sdnr_db =
        std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

double sdnr_at(int levels, const SignalDistribution& signal, double sigma_n, double delta,
               const QuadratureSpec& spec) {
  const auto q = MidRiseQuantizer::from_levels(levels, delta);
  return sdnr_noisy(s_referenced_coefficients(q, signal, sigma_n, spec)).sdnr_linear;
}

// golden-section maximization on [a, b]; returns the best sampled point
std::pair<double, double> golden_max(const std::function<double(double)>& f, double a, double b,
                                     double xtol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw DomainError("delta_grid", "delta grid must be nonempty");
  if (!(grid.front() > 0.0)) throw DomainError("delta_grid", "delta grid must be positive");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (!(grid[i] < grid[i + 1]))
      throw DomainError("delta_grid", "delta grid must be strictly increasing");
}

}  // namespace

SweepResult sweep_delta(int levels, const SignalDistribution& signal, double sigma_n,
                        std::span<const double> delta_grid, const QuadratureSpec& spec) {
  validate_grid(delta_grid);
  SweepResult result;
  result.levels = levels;
  result.signal = signal.name();
  result.sigma_n = sigma_n;
  result.rows.reserve(delta_grid.size());
  for (double delta : delta_grid)
    result.rows.push_back(
        evaluate_row(MidRiseQuantizer::from_levels(levels, delta), signal, sigma_n, spec));

  // locate the best finite row, then refine between its neighbours
  std::size_t best = delta_grid.size();
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const auto& r = result.rows[i];
    if (!r.ok || !std::isfinite(r.sdnr_linear)) continue;
    if (best == delta_grid.size() || r.sdnr_linear > result.rows[best].sdnr_linear) best = i;
  }
  if (best == delta_grid.size()) {
    result.optimum = {std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN(), false};
    return result;
  }
  result.optimum.at_boundary = (best == 0 || best + 1 == result.rows.size());
  const double lo = best > 0 ? delta_grid[best - 1] : delta_grid[best];
  const double hi = best + 1 < delta_grid.size() ? delta_grid[best + 1] : delta_grid[best];
  result.optimum.delta_star = delta_grid[best];
  result.optimum.sdnr_star = result.rows[best].sdnr_linear;
  if (lo < hi) {
    auto [dstar, fstar] = golden_max(
        [&](double d) { return sdnr_at(levels, signal, sigma_n, d, spec); }, lo, hi, 1e-4);
    if (fstar > result.optimum.sdnr_star) {
      result.optimum.delta_star = dstar;
      result.optimum.sdnr_star = fstar;
    }
  }
  return result;
}

SweepOptimum optimize_delta(int levels, const SignalDistribution& signal, double sigma_n,
                            double lo, double hi, const QuadratureSpec& spec, int coarse_points,
                            double delta_tolerance) {
  if (!(lo > 0.0) || !(hi > lo)) throw DomainError("bracket", "need 0 < lo < hi");
  if (coarse_points < 3) throw DomainError("coarse_points", "coarse scan needs >= 3 points");
  if (!(delta_tolerance > 0.0)) throw DomainError("delta_tolerance", "tolerance must be > 0");

  auto f = [&](double d) { return sdnr_at(levels, signal, sigma_n, d, spec); };

  const int n = std::max(coarse_points, 200);
  std::size_t best = 0;
  double best_f = -std::numeric_limits<double>::infinity();
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double v = f(grid[i]);
    if (v > best_f) {
      best_f = v;
      best = i;
    }
  }

  SweepOptimum opt;
  opt.at_boundary = (best == 0 || best + 1 == grid.size());
  const double a = best > 0 ? grid[best - 1] : grid[best];
  const double b = best + 1 < grid.size() ? grid[best + 1] : grid[best];
  opt.delta_star = grid[best];
  opt.sdnr_star = best_f;
  if (a < b) {
    auto [dstar, fstar] = golden_max(f, a, b, delta_tolerance);
    if (fstar > opt.sdnr_star) {
      opt.delta_star = dstar;
      opt.sdnr_star = fstar;
    }
  }
  return opt;
}

std::vector<double> GridSpec::expand() const {
  if (!(step > 0.0)) throw DomainError("grid", "grid step must be > 0");
  if (!(hi > lo)) throw DomainError("grid", "grid needs lo < hi");
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = lo + static_cast<double>(i) * step;
    if (v > hi + 0.5 * step) break;
    out.push_back(v);
  }
  return out;
}

namespace {

std::string trimmed_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

DataTable conditional_moment_table(int figure_id, const FigureOverrides& ov) {
  const int levels = ov.levels.value_or(8);
  const double delta = ov.delta.value_or(1.0);
  const std::vector<double> sigmas = ov.sigma_n_values.value_or(std::vector<double>{0.1, 0.5, 0.9});
  const GridSpec grid = ov.grid.value_or(GridSpec{-5.0, 5.0, 0.05});
  const auto q = MidRiseQuantizer::from_levels(levels, delta);
  const bool second_moment = figure_id == 2;

  DataTable t;
  t.columns.push_back("s");
  for (double sn : sigmas)
    t.columns.push_back((second_moment ? "mu_y2_sn" : "mu_y_sn") + trimmed_number(sn));
  for (double s : grid.expand()) {
    std::vector<double> row{s};
    for (double sn : sigmas)
      row.push_back(second_moment ? mu_y2_given_s(q, sn, s) : mu_y_given_s(q, sn, s));
    t.rows.push_back(std::move(row));
  }
  return t;
}

DataTable sweep_table(int figure_id, const FigureOverrides& ov) {
  const int levels = ov.levels.value_or(8);
  const double sigma_n = ov.sigma_n.value_or(std::sqrt(0.5));
  const GridSpec grid = ov.grid.value_or(GridSpec{0.01, 2.0, 0.005});
  const auto signal = figure_id == 3
                          ? SignalDistribution::binary(ov.amplitude.value_or(1.0))
                          : SignalDistribution::pam4(ov.amplitude.value_or(std::sqrt(0.2)));
  return to_table(sweep_delta(levels, signal, sigma_n, grid.expand()));
}

}  // namespace

DataTable emit_figure_data(int figure_id, const FigureOverrides& overrides) {
  switch (figure_id) {
    case 1:
    case 2:
      return conditional_moment_table(figure_id, overrides);
    case 3:
    case 4:
      return sweep_table(figure_id, overrides);
    default:
      throw DomainError("figure_id", "figure id must be 1, 2, 3 or 4");
  }
}

DataTable to_table(const SweepResult& result) {
  DataTable t;
  t.columns = {"delta", "alpha_s", "gamma_s", "sdnr_linear", "sdnr_db"};
  t.rows.reserve(result.rows.size());
  for (const auto& r : result.rows)
    t.rows.push_back({r.delta, r.alpha_s, r.gamma_s, r.sdnr_linear, r.sdnr_db});
  return t;
}

}  // namespace bussgang
