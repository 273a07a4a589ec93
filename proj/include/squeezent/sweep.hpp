#pragma once

// Temperature sweeps of the SSI lower bound and entanglement thresholds.

#include "squeezent/ssi_witness.hpp"
#include "squeezent/thermal_model.hpp"

#include <vector>

namespace sqz {

enum class GridScale { linear, log };

/// steps >= 1 temperatures from t_min to t_max inclusive. t_min may be 0 only
/// on a linear grid (the T = 0 limit point).
std::vector<double> temperature_grid(double t_min, double t_max, int steps, GridScale scale);

struct LowerRow {
  double temperature = 0.0;
  double log_z = 0.0;
  double mean_jz = 0.0;
  double jz2 = 0.0;
  double jx2 = 0.0;
  double xi = 0.0;
  int k = 0;
  double lower_bound = 0.0;
};

LowerRow lower_row(const XXZParams& params, double temperature);

/// Rows in the order of `temperatures`; jobs > 1 evaluates points on a worker
/// pool.
std::vector<LowerRow> lower_sweep(const XXZParams& params, const std::vector<double>& temperatures, int jobs = 1);

struct ThresholdResult {
  bool found = false;
  /// Certified bracket: lower_bound(left) > 0, lower_bound(right) = 0.
  double left = 0.0;
  double right = 0.0;
  double temperature = 0.0;  // midpoint of the bracket
};

/// Largest temperature with a positive lower bound. Scans a log grid on
/// [t_lo, t_hi] from the top for the first positive point, then bisects
/// until the bracket is narrower than tol.
ThresholdResult entanglement_threshold(const XXZParams& params, double t_lo = 1e-3, double t_hi = 0.0,
                                       double tol = 1e-7, int scan_points = 200);

}  // namespace sqz
