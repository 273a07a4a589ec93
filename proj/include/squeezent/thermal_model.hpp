#pragma once

// Fully connected XXZ model
//
//   H = (g/N)(J_x^2 + J_y^2) + (g_z/N) J_z^2 + h J_z
//
// which is diagonal in |J, Jz> with E = g J(J+1)/N - (g - g_z) Jz^2/N + h Jz.

#include "squeezent/spin_blocks.hpp"

#include <Eigen/Dense>

namespace sqz {

struct XXZParams {
  double g = 1.0;
  double gz = 1.0;
  double h = 0.0;
  int n = 2;

  /// Throws DomainError for N < 2 or non-finite couplings.
  void validate() const;
};

struct ThermalPoint {
  XXZParams params;
  double temperature = 0.0;
  /// NaN for the T = 0 limit.
  double log_z = 0.0;
  double e_min = 0.0;
  BlockDiagonalState state;
};

double sector_energy(const XXZParams& params, int two_j, int two_m);

/// log Z at T > 0 by log-sum-exp over cells with log(mu_J) folded in.
double partition_function(const XXZParams& params, double temperature);

/// Gibbs state at T > 0, or the T = 0 limit (uniform over the degenerate
/// ground cells, each copy weighted equally).
ThermalPoint gibbs_blocks(const XXZParams& params, double temperature);

/// <H> from the cell energies.
double mean_energy(const BlockDiagonalState& state, const XXZParams& params);

/// Dense 2^N x 2^N Hamiltonian from the collective spin operators.
Eigen::MatrixXd dense_hamiltonian(const XXZParams& params);

/// Large-N lower bound for the XXX model: max{0, 1 - 6T/(4T + 2g)}.
double asymptotic_xxx_bound(double g, double temperature);

/// Large-N lower bound for the XX model (g = 1, g_z = h = 0):
/// max{0, 1 - 4T/(2T + 1)}.
double asymptotic_xx_bound(double temperature);

}  // namespace sqz
