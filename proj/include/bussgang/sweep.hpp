#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bussgang/decomposition.hpp"
#include "bussgang/signal_model.hpp"

namespace bussgang {

struct SweepRow {
  double delta = 0.0;
  double alpha_s = 0.0;
  double gamma_s = 0.0;
  double sdnr_linear = 0.0;
  double sdnr_db = 0.0;
  bool ok = true;  // false when the coefficients were not computable at this delta
};

struct SweepOptimum {
  double delta_star = 0.0;
  double sdnr_star = 0.0;
  bool at_boundary = false;  // no interior peak on the scanned range
};

struct SweepResult {
  std::vector<SweepRow> rows;  // in grid order, delta ascending
  SweepOptimum optimum;        // refined beyond the row grid
  int levels = 0;
  std::string signal;
  double sigma_n = 0.0;
};

// Evaluates the s-referenced coefficients and SDNR on each grid point. A grid
// point where the computation fails is flagged and the sweep continues. The
// optimum is the grid maximum refined by golden-section search between its
// neighbours, so it is never below any row.
SweepResult sweep_delta(int levels, const SignalDistribution& signal, double sigma_n,
                        std::span<const double> delta_grid, const QuadratureSpec& spec = {});

// Coarse scan of at least `coarse_points` points over (lo, hi) followed by
// golden-section refinement of the bracketed peak to |delta error| <=
// delta_tolerance. A maximum on the bracket edge sets `at_boundary`.
SweepOptimum optimize_delta(int levels, const SignalDistribution& signal, double sigma_n,
                            double lo, double hi, const QuadratureSpec& spec = {},
                            int coarse_points = 256, double delta_tolerance = 1e-4);

// Rectangular table of named columns, the in-memory form of all emitted data.
struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;

  std::vector<double> expand() const;  // validates and materializes lo, lo+step, ..., hi
};

struct FigureOverrides {
  std::optional<int> levels;
  std::optional<double> delta;                       // figures 1-2
  std::optional<std::vector<double>> sigma_n_values; // figures 1-2
  std::optional<double> sigma_n;                     // figures 3-4
  std::optional<double> amplitude;                   // figures 3-4
  std::optional<GridSpec> grid;  // s grid (figures 1-2) or delta grid (figures 3-4)
};

// Data behind the four standard plots:
//   1: conditional mean of y vs s, one column per sigma_n   (default M=8, delta=1)
//   2: conditional second moment of y vs s, likewise
//   3: binary-signal sweep of (alpha_s, gamma_s, SDNR) vs delta (A=1, M=8, sigma_n=sqrt(0.5))
//   4: 4PAM sweep, A=sqrt(0.2), same M and sigma_n
DataTable emit_figure_data(int figure_id, const FigureOverrides& overrides = {});

DataTable to_table(const SweepResult& result);

}  // namespace bussgang
