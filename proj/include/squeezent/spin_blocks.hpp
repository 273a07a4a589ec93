#pragma once

// Permutation- and z-rotation-invariant N-qubit states.
//
// Such a state is block diagonal in the Schur basis |J, Jz, i_J>:
//
//   rho = sum_{J,Jz} alpha_{J,Jz} |J,Jz><J,Jz| (x) 1_{mu_J}
//
// We store the cell probabilities p_{J,Jz} = mu_J * alpha_{J,Jz} rather than
// alpha itself. Both mu_J and alpha leave the double range once N reaches a
// few hundred, while p is always a probability. alpha is derived on demand.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace sqz {

/// Spin sector of an N-qubit system. Holds 2J so that odd N (half-integer J)
/// stays exact.
struct SectorIndex {
  int n;
  int two_j;

  SectorIndex(int n, int two_j);

  double j() const { return 0.5 * two_j; }
  int dim() const { return two_j + 1; }
};

bool is_valid_sector(int n, int two_j) noexcept;

/// mu_J = C(N, N/2-J) - C(N, N/2-J-1). Throws CapabilityError if it does not
/// fit in 64 bits.
std::uint64_t multiplicity(int n, int two_j);

/// log(mu_J), valid for any N.
double log_multiplicity(int n, int two_j);

double log_binomial(int n, int k);

/// Flat cell layout shared by every state with the same N. Sectors are
/// ordered by ascending 2J, cells inside a sector by ascending Jz.
class CellLayout {
 public:
  explicit CellLayout(int n);

  int num_particles() const { return n_; }
  int num_sectors() const { return static_cast<int>(offsets_.size()); }
  int num_cells() const { return num_cells_; }
  int two_j_min() const { return n_ % 2; }
  int sector_two_j(int s) const { return two_j_min() + 2 * s; }
  int sector_of(int two_j) const { return (two_j - two_j_min()) / 2; }
  int offset(int s) const { return offsets_[static_cast<std::size_t>(s)]; }

  /// Flat index of (2J, 2Jz); throws DomainError when out of range.
  int cell_index(int two_j, int two_m) const;

  /// log(mu_J) per sector.
  double log_mu(int s) const { return log_mu_[static_cast<std::size_t>(s)]; }
  /// 1/mu_J per sector (0 once mu_J exceeds the double range).
  double inv_mu(int s) const { return inv_mu_[static_cast<std::size_t>(s)]; }

 private:
  int n_;
  int num_cells_ = 0;
  std::vector<int> offsets_;
  std::vector<double> log_mu_;
  std::vector<double> inv_mu_;
};

class BlockDiagonalState {
 public:
  /// From per-copy coefficients alpha_{J,Jz}, one vector of length 2J+1 per
  /// sector (ascending 2J, Jz ascending). Validates and renormalizes.
  static BlockDiagonalState from_alpha(int n, const std::vector<std::vector<double>>& alpha);

  /// From flat cell probabilities p_{J,Jz} in CellLayout order.
  static BlockDiagonalState from_weights(int n, std::vector<double> weights);

  static BlockDiagonalState maximally_mixed(int n);

  /// Single cell (2J, 2Jz) with all weight, e.g. a Dicke state (J = N/2) or
  /// the uniform mixture of the mu_J copies of |J,Jz>.
  static BlockDiagonalState basis_cell(int n, int two_j, int two_m);

  int num_particles() const { return layout_.num_particles(); }
  const CellLayout& layout() const { return layout_; }

  std::span<const double> weights() const { return weights_; }
  std::span<const double> sector_weights(int s) const;

  double weight(int two_j, int two_m) const;
  double alpha(int two_j, int two_m) const;
  std::vector<std::vector<double>> alpha_table() const;

  double trace() const;

  friend bool operator==(const BlockDiagonalState& a, const BlockDiagonalState& b) {
    return a.num_particles() == b.num_particles() && a.weights_ == b.weights_;
  }

 private:
  BlockDiagonalState(int n, std::vector<double> weights);

  CellLayout layout_;
  std::vector<double> weights_;
};

/// First moments <J_k> and symmetrized second moments 1/2<J_k J_l + J_l J_k>.
struct MomentSummary {
  int n = 0;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d second = Eigen::Matrix3d::Zero();

  /// Throws DomainError if second is not symmetric, has negative diagonal, or
  /// its trace exceeds (N/2)(N/2+1).
  void validate() const;
};

MomentSummary moments_from_blocks(const BlockDiagonalState& state);

/// Convex combination; weights must sum to one within 1e-12.
BlockDiagonalState mix(std::span<const BlockDiagonalState> states, std::span<const double> weights);

/// tr(rho - sigma)^2 of the full 2^N x 2^N matrices, computed blockwise.
double two_norm_distance(const BlockDiagonalState& a, const BlockDiagonalState& b);

/// Smallest t in [0,1] with rho - (1-t) sigma >= 0. Exact, since both are
/// diagonal in the same basis.
double bsa_mixing_parameter(const BlockDiagonalState& rho, const BlockDiagonalState& sigma);

}  // namespace sqz
