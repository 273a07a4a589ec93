#pragma once

// Spin-squeezing inequalities and the BSA lower bound they certify.
//
// For a subset S of principal axes of X the facet
//
//   xi_S = sum_{k not in S} (dJ_k)^2 - sum_{k in S} <J_k^2>/(N-1) + |S| N^2/(4(N-1)) - N/2
//
// is nonnegative on separable states. xi (the SSI parameter) is xi_S for S the
// positive eigenvalues of X, which is the smallest facet value. The smallest
// value is not always the largest violation once each facet is divided by its
// own normalization, so the bound maximizes over S.

#include "squeezent/spin_blocks.hpp"

#include <Eigen/Dense>

#include <array>

namespace sqz {

Eigen::Matrix3d gamma_matrix(const MomentSummary& m);
Eigen::Matrix3d x_matrix(const MomentSummary& m);

/// Left-hand sides of the four inequality families in the eigenframe of X.
/// pair[i] and single[i] refer to eigen-axis i (ascending eigenvalue order):
/// pair[i] is (dJ_k)^2 + (dJ_l)^2 - <J_i^2>/(N-1) - N(N-2)/(4(N-1)) with
/// {k,l} the other two axes, single[i] is
/// (dJ_i)^2 - (<J_k^2> + <J_l^2>)/(N-1) + N/(2(N-1)).
struct FacetValues {
  double total_variance = 0.0;
  std::array<double, 3> pair{};
  std::array<double, 3> single{};
  double casimir = 0.0;

  double min_value() const;
};

struct SSIResult {
  /// Number of positive eigenvalues of X; xi is the facet they select.
  int k = 0;
  double xi = 0.0;
  /// B for that facet: minus the smallest eigenvalue of the linear witness
  /// operator whose expectation on the input equals xi.
  double normalization = 0.0;
  /// Closed-form B_K for zero mean and even N, kept for reference.
  double closed_form_normalization = 0.0;

  /// Facet with the largest normalized violation. Every facet is a valid
  /// witness, so its bound is certified too; ties go to the eigenvalue facet.
  unsigned facet_subset = 0;  // bit i set: eigen-axis i is in S
  int facet_k = 0;
  double facet_xi = 0.0;
  double facet_normalization = 0.0;

  /// max{0, -facet_xi / facet_normalization}, at least max{0, -xi / normalization}.
  double lower_bound = 0.0;

  Eigen::Vector3d x_eigenvalues = Eigen::Vector3d::Zero();
  Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();
  FacetValues facets;
};

/// Eigenvalues of X above this count as positive.
double zero_tolerance(int n);

/// B_0 = N/2, B_1 = N(N-2)/(4(N-1)), B_2 = N^2/(4(N-1)), B_3 = N(N+2)/(2(N-1)).
double closed_form_normalization(int n, int k);

SSIResult ssi_parameter(const MomentSummary& m);

FacetValues evaluate_inequality_set(const MomentSummary& m);

/// Smallest eigenvalue over all N-qubit states of
///   sum_k c_k J_k^2 - 2 b.J + offset
/// where c has at most two distinct values. Exact for N <= 64; above that a
/// component of b outside the distinguished axis is handled by Weyl's bound,
/// which can only lower the returned value.
double min_quadratic_spin_eigenvalue(int n, const Eigen::Vector3d& c, const Eigen::Vector3d& b, double offset);

}  // namespace sqz
