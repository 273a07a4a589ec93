#pragma once

// Representation-theoretic kernels: Jz-product coefficients, Wigner rotations
// inside spin sectors, and the explicit Schur basis for small N.

#include "squeezent/spin_blocks.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <filesystem>
#include <vector>

namespace sqz {

inline constexpr int kDefaultDenseLimit = 10;

/// Largest N accepted by dense/Schur paths. Defaults to kDefaultDenseLimit;
/// overridable through SQUEEZENT_DENSE_LIMIT.
int dense_limit();

/// Twirl of |up>^K |down>^(N-K): alpha_{J,Mz} = 1/C(N,K) for J >= |Mz|.
BlockDiagonalState jz_product_state_blocks(int n, int k_up);

/// d^J(theta) = exp(-i theta J_y) in the spin-J representation, rows and
/// columns ordered by ascending m.
struct WignerD {
  int two_j = 0;
  double theta = 0.0;
  Eigen::MatrixXd d;
};

WignerD wigner_d(int two_j, double theta);

/// alpha'_{J,m} = sum_{m'} d^J_{m,m'}(theta)^2 alpha_{J,m'}: the z-twirl of a
/// global rotation about J_y.
BlockDiagonalState rotate_and_twirl(const BlockDiagonalState& state, double theta);

/// Pure product state of N qubits, one normalized (up, down) spinor each.
struct ProductState {
  std::vector<Eigen::Vector2cd> qubits;

  int num_particles() const { return static_cast<int>(qubits.size()); }

  /// Amplitudes on the 2^N computational basis; bit n of the index is qubit
  /// n, set bit = spin up.
  Eigen::VectorXcd amplitudes() const;

  std::vector<Eigen::Vector3d> bloch_vectors() const;
  static ProductState from_bloch(const std::vector<Eigen::Vector3d>& bloch);
  /// K up spins followed by N-K down spins.
  static ProductState computational(int n, int k_up);
};

/// Orthonormal simultaneous eigenbasis of J^2 and J_z. The multiplicity index
/// only lives here; P_{J,Jz} is stored as the block of eigenvectors inside the
/// Hamming-weight subspace with Jz = K - N/2.
class SchurBasis {
 public:
  static SchurBasis build(int n);

  int num_particles() const { return n_; }
  const CellLayout& layout() const { return layout_; }

  /// Computational-basis indices with k_up set bits, ascending.
  const std::vector<int>& weight_indices(int k_up) const { return indices_[static_cast<std::size_t>(k_up)]; }

  /// Columns are |J, Jz=k_up-N/2, i_J> restricted to the weight-k_up subspace.
  const Eigen::MatrixXd& vectors(int two_j, int k_up) const;

  /// Dense 2^N x 2^N projector P_{J,Jz}.
  Eigen::MatrixXd projector(int two_j, int two_m) const;

  /// Dense matrix of a block-diagonal state.
  Eigen::MatrixXd to_dense(const BlockDiagonalState& state) const;

  /// Dense matrix sum_c coeffs[c] * P_c / mu_J for arbitrary real cell
  /// coefficients (not necessarily a state), e.g. a residual rho - sigma.
  Eigen::MatrixXd dense_from_cells(std::span<const double> cell_probabilities) const;

  /// p_{J,Jz} = tr(P_{J,Jz} rho) for a dense operator.
  std::vector<double> project_cells(const Eigen::MatrixXcd& rho) const;

  /// Largest deviation of sum P from the identity, of P^2 from P and of
  /// rank P from mu_J.
  double completeness_error() const;

  friend void write_schur_cache(const SchurBasis& basis, const std::filesystem::path& path);
  friend SchurBasis read_schur_cache(const std::filesystem::path& path);

 private:
  SchurBasis(int n) : n_(n), layout_(n) {}

  int n_;
  CellLayout layout_;
  std::vector<std::vector<int>> indices_;
  // blocks_[k][s]: eigenvectors for sector s in weight subspace k (may have 0 columns)
  std::vector<std::vector<Eigen::MatrixXd>> blocks_;
};

/// alpha_{J,Jz} for the permutation and z-rotation twirl of a product state.
BlockDiagonalState symmetrize_product_state(const ProductState& product, const SchurBasis& basis);

/// Binary cache of a Schur basis. The reader re-checks completeness and
/// throws IntegrityError on a corrupted or inconsistent file.
void write_schur_cache(const SchurBasis& basis, const std::filesystem::path& path);
SchurBasis read_schur_cache(const std::filesystem::path& path);

/// Collective spin operators J_x, J_y, J_z as dense 2^N matrices.
std::array<Eigen::MatrixXcd, 3> dense_collective_spin(int n);

}  // namespace sqz
