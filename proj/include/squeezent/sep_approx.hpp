#pragma once

// Separable ensembles that certify upper bounds on the BSA.
//
// sigma is always an explicit convex mixture of twirled product states, so the
// bound t = bsa_mixing_parameter(rho, sigma) can be re-verified from the
// member descriptors alone.

#include "squeezent/schur_basis.hpp"
#include "squeezent/spin_blocks.hpp"
#include "squeezent/ssi_witness.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sqz {

/// Twirl of exp(-i theta J_y) |up>^K |down>^(N-K).
struct SimpleAnsatz {
  int k_up = 0;
  double theta = 0.0;
};

/// Twirl of an arbitrary pure product state, one unit Bloch vector per qubit.
struct GeneralProduct {
  std::vector<Eigen::Vector3d> bloch;
};

using Descriptor = std::variant<SimpleAnsatz, GeneralProduct>;

struct EnsembleMember {
  double weight = 0.0;
  BlockDiagonalState blocks;
  Descriptor descriptor;
};

/// Recomputes the blocks of a descriptor. GeneralProduct needs a Schur basis
/// for the same N.
BlockDiagonalState derive_blocks(int n, const Descriptor& descriptor, const SchurBasis* basis = nullptr);

std::vector<int> default_k_set(int n);
/// points uniform values in [0, pi].
std::vector<double> default_theta_grid(int points = 32);

/// One unit-weight member per (K, theta), with theta and -theta merged.
std::vector<EnsembleMember> simple_ansatz_library(int n, std::span<const int> k_set,
                                                  std::span<const double> theta_grid);

struct RefitResult {
  std::vector<double> weights;
  double distance = 0.0;       // tr(rho - sigma)^2
  double kkt_residual = 0.0;
  bool degenerate = false;     // members coincide; a vertex was returned
};

/// Minimizes tr(rho - sum_i w_i sigma_i)^2 over the probability simplex with
/// an exact active-set method.
RefitResult refit_weights(const BlockDiagonalState& target, std::span<const BlockDiagonalState> members);

struct SeesawResult {
  ProductState state;
  double overlap = 0.0;
  /// Overlap after every single-particle update; nondecreasing.
  std::vector<double> history;
  int sweeps = 0;
};

/// Maximizes <Psi|R|Psi> over product states by cyclic single-qubit updates
/// from a seeded random start.
SeesawResult seesaw_best_product(const Eigen::MatrixXcd& residual, std::uint64_t seed, int max_sweeps = 200);

enum class Termination { converged, ball_reached, max_iterations };

const char* to_string(Termination t);

struct UpperBoundReport {
  double t_bsa = 1.0;
  /// tr(rho - sigma)^2
  double residual_two_norm = 0.0;
  BlockDiagonalState sigma;
  std::vector<EnsembleMember> ensemble;
  int iterations = 0;
  Termination termination = Termination::max_iterations;
  std::uint64_t seed = 0;
  std::string ansatz;
  /// Set when the BSA remainder was shown separable by the ball test, i.e.
  /// the target itself is separable.
  bool ball_certified = false;
};

UpperBoundReport upper_bound_simple(const BlockDiagonalState& target, std::span<const int> k_set,
                                    std::span<const double> theta_grid);

struct FullOptions {
  int restarts = 8;
  std::uint64_t seed = 0;
  int max_outer = 100;
  int max_sweeps = 200;
  /// Stop once tr(rho - sigma)^2 or the Frank-Wolfe gap drops below this.
  double tolerance = 1e-12;
  bool ball_check = false;
  double ball_radius = 0.0;  // 0 selects default_ball_radius(N)
  /// Initial ensemble, e.g. a converged certificate at a nearby temperature.
  std::vector<EnsembleMember> warm_start;
};

UpperBoundReport upper_bound_full(const BlockDiagonalState& target, const SchurBasis& basis,
                                  const FullOptions& options = {});

/// States within this Frobenius distance of 1/2^N are fully separable: the
/// Pauli coefficients c_P of 2^N rho satisfy sum |c_P| <= 1, making rho a
/// mixture of (1 +- P)/2^N.
double default_ball_radius(int n);

/// True when some remainder nu = (rho - (1-t) sigma)/t with t at or above the
/// BSA value lies inside the separable ball, which makes rho separable.
bool separable_ball_check(const BlockDiagonalState& target, const BlockDiagonalState& sigma, double radius = 0.0);

struct SandwichReport {
  double lower = 0.0;
  double upper = 0.0;
  double gap = 0.0;
};

/// Throws IntegrityError if the certified lower bound exceeds the upper one.
SandwichReport sandwich_report(const BlockDiagonalState& target, const SSIResult& lower,
                               const UpperBoundReport& upper);

struct CertificateCheck {
  double member_error = 0.0;  // largest cell deviation of stored vs re-derived members
  double sigma_error = 0.0;
  double t_error = 0.0;
  double weight_sum_error = 0.0;
  double min_remainder = 0.0;  // smallest cell of rho - (1 - t) sigma
};

CertificateCheck verify_certificate(const BlockDiagonalState& target, const UpperBoundReport& report,
                                    const SchurBasis* basis = nullptr);

}  // namespace sqz
