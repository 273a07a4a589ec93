#include "squeezent/thermal_model.hpp"

#include "squeezent/errors.hpp"
#include "squeezent/schur_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sqz {

namespace {

// Relative tolerance for ground-state degeneracy at T = 0.
constexpr double kDegenerateTol = 1e-12;

void check_temperature(double temperature, bool allow_zero) {
  if (!std::isfinite(temperature) || temperature < 0.0 || (!allow_zero && temperature == 0.0))
    throw DomainError("temperature must be positive, got " + std::to_string(temperature));
}

std::vector<double> cell_energies(const XXZParams& params, const CellLayout& layout) {
  std::vector<double> e(static_cast<std::size_t>(layout.num_cells()));
  for (int s = 0; s < layout.num_sectors(); ++s) {
    const int two_j = layout.sector_two_j(s);
    for (int two_m = -two_j; two_m <= two_j; two_m += 2)
      e[static_cast<std::size_t>(layout.cell_index(two_j, two_m))] = sector_energy(params, two_j, two_m);
  }
  return e;
}

}  // namespace

void XXZParams::validate() const {
  if (n < 2) throw DomainError("XXZ model needs N >= 2, got " + std::to_string(n));
  if (!std::isfinite(g) || !std::isfinite(gz) || !std::isfinite(h))
    throw DomainError("XXZ couplings must be finite");
}

double sector_energy(const XXZParams& params, int two_j, int two_m) {
  params.validate();
  if (!is_valid_sector(params.n, two_j) || std::abs(two_m) > two_j || (two_j - two_m) % 2 != 0)
    throw DomainError("invalid cell (2J=" + std::to_string(two_j) + ", 2Jz=" + std::to_string(two_m) + ")");
  const double j = 0.5 * two_j;
  const double m = 0.5 * two_m;
  const double n = params.n;
  return params.g * j * (j + 1.0) / n - (params.g - params.gz) * m * m / n + params.h * m;
}

double partition_function(const XXZParams& params, double temperature) {
  params.validate();
  check_temperature(temperature, false);
  const CellLayout layout(params.n);
  const auto e = cell_energies(params, layout);
  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> expo(e.size());
  for (int s = 0; s < layout.num_sectors(); ++s) {
    const int two_j = layout.sector_two_j(s);
    for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
      const auto c = static_cast<std::size_t>(layout.cell_index(two_j, two_m));
      expo[c] = layout.log_mu(s) - e[c] / temperature;
      top = std::max(top, expo[c]);
    }
  }
  double sum = 0.0;
  for (double x : expo) sum += std::exp(x - top);
  return top + std::log(sum);
}

ThermalPoint gibbs_blocks(const XXZParams& params, double temperature) {
  params.validate();
  check_temperature(temperature, true);
  const CellLayout layout(params.n);
  const auto e = cell_energies(params, layout);
  const double e_min = *std::min_element(e.begin(), e.end());
  std::vector<double> w(e.size(), 0.0);
  double log_z = std::numeric_limits<double>::quiet_NaN();

  if (temperature == 0.0) {
    double scale = 1.0;
    for (double x : e) scale = std::max(scale, std::abs(x));
    std::vector<double> log_w(e.size(), -std::numeric_limits<double>::infinity());
    double top = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < layout.num_sectors(); ++s) {
      const int two_j = layout.sector_two_j(s);
      for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
        const auto c = static_cast<std::size_t>(layout.cell_index(two_j, two_m));
        if (e[c] - e_min <= kDegenerateTol * scale) {
          log_w[c] = layout.log_mu(s);
          top = std::max(top, log_w[c]);
        }
      }
    }
    for (std::size_t c = 0; c < w.size(); ++c) w[c] = std::exp(log_w[c] - top);
  } else {
    // Shift by the largest log-weight so the dominant cell is exp(0).
    std::vector<double> expo(e.size());
    double top = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < layout.num_sectors(); ++s) {
      const int two_j = layout.sector_two_j(s);
      for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
        const auto c = static_cast<std::size_t>(layout.cell_index(two_j, two_m));
        expo[c] = layout.log_mu(s) - e[c] / temperature;
        top = std::max(top, expo[c]);
      }
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < w.size(); ++c) {
      w[c] = std::exp(expo[c] - top);
      sum += w[c];
    }
    log_z = top + std::log(sum);
  }
  double total = 0.0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  return ThermalPoint{params, temperature, log_z, e_min, BlockDiagonalState::from_weights(params.n, std::move(w))};
}

double mean_energy(const BlockDiagonalState& state, const XXZParams& params) {
  if (state.num_particles() != params.n) throw DomainError("state and model have different N");
  const CellLayout& layout = state.layout();
  const auto e = cell_energies(params, layout);
  double sum = 0.0;
  const auto w = state.weights();
  for (std::size_t c = 0; c < e.size(); ++c) sum += w[c] * e[c];
  return sum;
}

Eigen::MatrixXd dense_hamiltonian(const XXZParams& params) {
  params.validate();
  const auto spin = dense_collective_spin(params.n);
  const double n = params.n;
  const Eigen::MatrixXcd h = (params.g / n) * (spin[0] * spin[0] + spin[1] * spin[1]) +
                             (params.gz / n) * spin[2] * spin[2] + params.h * spin[2];
  if (h.imag().cwiseAbs().maxCoeff() > 1e-12) throw IntegrityError("dense Hamiltonian is not real");
  return h.real();
}

double asymptotic_xxx_bound(double g, double temperature) {
  if (!(g > 0.0)) throw DomainError("asymptotic XXX bound needs g > 0");
  check_temperature(temperature, true);
  return std::clamp(1.0 - 6.0 * temperature / (4.0 * temperature + 2.0 * g), 0.0, 1.0);
}

double asymptotic_xx_bound(double temperature) {
  check_temperature(temperature, true);
  return std::clamp(1.0 - 4.0 * temperature / (2.0 * temperature + 1.0), 0.0, 1.0);
}

}  // namespace sqz
