#include "squeezent/sweep.hpp"

#include "squeezent/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace sqz {

std::vector<double> temperature_grid(double t_min, double t_max, int steps, GridScale scale) {
  if (steps < 1) throw DomainError("sweep needs at least one step");
  if (!std::isfinite(t_min) || !std::isfinite(t_max) || t_min < 0.0 || t_max < t_min)
    throw DomainError("invalid temperature range");
  if (scale == GridScale::log && t_min <= 0.0) throw DomainError("log grid needs T_min > 0");
  if (steps == 1) return {t_min};
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double f = static_cast<double>(i) / (steps - 1);
    out[static_cast<std::size_t>(i)] =
        scale == GridScale::linear ? t_min + f * (t_max - t_min) : t_min * std::pow(t_max / t_min, f);
  }
  out.back() = t_max;
  return out;
}

LowerRow lower_row(const XXZParams& params, double temperature) {
  const auto point = gibbs_blocks(params, temperature);
  const auto m = moments_from_blocks(point.state);
  const auto ssi = ssi_parameter(m);
  return LowerRow{temperature, point.log_z, m.mean(2), m.second(2, 2), m.second(0, 0), ssi.xi, ssi.k, ssi.lower_bound};
}

std::vector<LowerRow> lower_sweep(const XXZParams& params, const std::vector<double>& temperatures, int jobs) {
  params.validate();
  std::vector<LowerRow> rows(temperatures.size());
  const int workers = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(temperatures.size(), 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = lower_row(params, temperatures[i]);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < rows.size(); i = next++) {
        if (failed) return;
        try {
          rows[i] = lower_row(params, temperatures[i]);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return rows;
}

ThresholdResult entanglement_threshold(const XXZParams& params, double t_lo, double t_hi, double tol,
                                       int scan_points) {
  params.validate();
  if (!(t_hi > 0.0)) t_hi = 20.0 * std::max({1.0, std::abs(params.g), std::abs(params.gz), std::abs(params.h)});
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw DomainError("threshold search needs 0 < T_lo < T_hi");
  if (!(tol > 0.0)) throw DomainError("threshold tolerance must be positive");
  auto bound = [&](double t) { return lower_row(params, t).lower_bound; };

  const auto grid = temperature_grid(t_lo, t_hi, std::max(scan_points, 2), GridScale::log);
  ThresholdResult out;
  if (bound(grid.back()) > 0.0) {
    // Still entangled at the top of the range: report the open bracket.
    out.left = out.right = out.temperature = grid.back();
    return out;
  }
  for (std::size_t i = grid.size() - 1; i-- > 0;) {
    if (bound(grid[i]) > 0.0) {
      double a = grid[i];
      double b = grid[i + 1];
      while (b - a > tol) {
        const double mid = 0.5 * (a + b);
        if (bound(mid) > 0.0)
          a = mid;
        else
          b = mid;
      }
      out.found = true;
      out.left = a;
      out.right = b;
      out.temperature = 0.5 * (a + b);
      return out;
    }
  }
  return out;
}

}  // namespace sqz
