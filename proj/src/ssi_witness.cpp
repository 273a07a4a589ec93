#include "squeezent/ssi_witness.hpp"

#include "squeezent/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace sqz {

namespace {

constexpr int kExactTridiagonalLimit = 64;

void require_pairs(const MomentSummary& m) {
  m.validate();
  if (m.n < 2) throw DomainError("spin-squeezing inequalities need N >= 2");
}

struct Frame {
  Eigen::Vector3d eigenvalues;
  Eigen::Matrix3d axes;
  Eigen::Vector3d variance;  // diagonal of Gamma in the frame
  Eigen::Vector3d square;    // <J_k^2> in the frame
  Eigen::Vector3d mean;
};

Frame principal_frame(const MomentSummary& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(x_matrix(m));
  Frame f;
  f.eigenvalues = solver.eigenvalues();
  f.axes = solver.eigenvectors();
  const Eigen::Matrix3d g = f.axes.transpose() * gamma_matrix(m) * f.axes;
  const Eigen::Matrix3d s = f.axes.transpose() * m.second * f.axes;
  f.variance = g.diagonal();
  f.square = s.diagonal();
  f.mean = f.axes.transpose() * m.mean;
  return f;
}

double facet_value(const Frame& f, int n, unsigned subset) {
  const double nm1 = n - 1.0;
  double xi = -0.5 * n;
  for (int k = 0; k < 3; ++k) {
    if (subset & (1U << k))
      xi += 0.25 * n * n / nm1 - f.square(k) / nm1;
    else
      xi += f.variance(k);
  }
  return xi;
}

// B_S: minus the bottom of the spectrum of
//   sum_{k not in S} (J_k - <J_k>)^2 - sum_{k in S} J_k^2/(N-1) + |S| N^2/(4(N-1)) - N/2.
double facet_normalization(const Frame& f, int n, unsigned subset) {
  const double nm1 = n - 1.0;
  Eigen::Vector3d c;
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  double offset = -0.5 * n;
  for (int k = 0; k < 3; ++k) {
    if (subset & (1U << k)) {
      c(k) = -1.0 / nm1;
      offset += 0.25 * n * n / nm1;
    } else {
      c(k) = 1.0;
      b(k) = f.mean(k);
      offset += f.mean(k) * f.mean(k);
    }
  }
  return -min_quadratic_spin_eigenvalue(n, c, b, offset);
}

// Facet values are differences of O(N^2) terms; violations below this are
// rounding and must not be amplified by a small normalization.
double violation_floor(int n) { return 1e-12 * static_cast<double>(n) * n; }

double normalized_bound(double xi, double normalization, int n) {
  if (!(xi < -violation_floor(n)) || !(normalization > 0.0)) return 0.0;
  return std::min(1.0, -xi / normalization);
}

}  // namespace

double FacetValues::min_value() const {
  double v = std::min(total_variance, casimir);
  for (double x : pair) v = std::min(v, x);
  for (double x : single) v = std::min(v, x);
  return v;
}

Eigen::Matrix3d gamma_matrix(const MomentSummary& m) {
  m.validate();
  return m.second - m.mean * m.mean.transpose();
}

Eigen::Matrix3d x_matrix(const MomentSummary& m) {
  require_pairs(m);
  const double nm1 = m.n - 1.0;
  return gamma_matrix(m) + m.second / nm1 - (0.25 * m.n * m.n / nm1) * Eigen::Matrix3d::Identity();
}

double zero_tolerance(int n) { return 1e-10 * static_cast<double>(n) * n; }

double closed_form_normalization(int n, int k) {
  if (n < 2 || k < 0 || k > 3) throw DomainError("closed-form normalization needs N >= 2 and 0 <= K <= 3");
  const double nn = n;
  return nn / 2.0 - k * nn * nn / (4.0 * (nn - 1.0)) + nn * (nn + 2.0) * k * (k - 1) / (8.0 * (nn - 1.0));
}

double min_quadratic_spin_eigenvalue(int n, const Eigen::Vector3d& c, const Eigen::Vector3d& b, double offset) {
  if (n < 1) throw DomainError("particle number must be positive");
  const double scale = c.cwiseAbs().maxCoeff();
  auto same = [&](double x, double y) { return std::abs(x - y) <= 1e-15 * scale; };
  const CellLayout layout(n);
  double best = std::numeric_limits<double>::infinity();

  if (same(c(0), c(1)) && same(c(1), c(2))) {
    const double bn = b.norm();
    for (int s = 0; s < layout.num_sectors(); ++s) {
      const double j = 0.5 * layout.sector_two_j(s);
      best = std::min(best, c(0) * j * (j + 1.0) - 2.0 * bn * j);
    }
    return best + offset;
  }

  int q = 0;
  if (same(c(0), c(1)))
    q = 2;
  else if (same(c(0), c(2)))
    q = 1;
  else if (!same(c(1), c(2)))
    throw DomainError("quadratic spin operator with three distinct coefficients is not supported");
  const int p1 = (q + 1) % 3;
  const int p2 = (q + 2) % 3;
  const double cp = c(p1);
  const double cq = c(q);
  const double bq = b(q);
  const double bperp = std::hypot(b(p1), b(p2));

  for (int s = 0; s < layout.num_sectors(); ++s) {
    const int two_j = layout.sector_two_j(s);
    const double j = 0.5 * two_j;
    const double jj = j * (j + 1.0);
    Eigen::VectorXd diag(two_j + 1);
    for (int i = 0; i <= two_j; ++i) {
      const double m = -j + i;
      diag(i) = cp * (jj - m * m) + cq * m * m - 2.0 * bq * m;
    }
    double low = diag.minCoeff();
    if (bperp > 0.0 && two_j > 0) {
      if (n <= kExactTridiagonalLimit) {
        Eigen::VectorXd sub(two_j);
        for (int i = 0; i < two_j; ++i) {
          const double m = -j + i;
          sub(i) = -bperp * std::sqrt(jj - m * (m + 1.0));
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        low = solver.eigenvalues()(0);
      } else {
        // ||2 bperp J_perp|| = 2 bperp J
        low -= 2.0 * bperp * j;
      }
    }
    best = std::min(best, low);
  }
  return best + offset;
}

SSIResult ssi_parameter(const MomentSummary& m) {
  require_pairs(m);
  const Frame f = principal_frame(m);
  const int n = m.n;
  const double eps = zero_tolerance(n);

  SSIResult r;
  r.x_eigenvalues = f.eigenvalues;
  r.frame = f.axes;
  r.facets = evaluate_inequality_set(m);

  unsigned positive = 0;
  double xi = gamma_matrix(m).trace() - 0.5 * n;
  for (int k = 0; k < 3; ++k) {
    if (f.eigenvalues(k) > eps) {
      positive |= 1U << k;
      xi -= f.eigenvalues(k);
    }
  }
  r.k = std::popcount(positive);
  r.xi = xi;
  r.closed_form_normalization = closed_form_normalization(n, r.k);
  r.normalization = facet_normalization(f, n, positive);
  // Every state satisfies the K = 3 facet, so nothing is certified there.
  const double eigen_bound = r.k == 3 ? 0.0 : normalized_bound(xi, r.normalization, n);

  r.facet_subset = positive;
  r.facet_k = r.k;
  r.facet_xi = xi;
  r.facet_normalization = r.normalization;
  r.lower_bound = eigen_bound;
  for (unsigned subset = 0; subset < 7U; ++subset) {
    if (subset == positive) continue;
    const double value = facet_value(f, n, subset);
    if (!(value < -violation_floor(n))) continue;
    const double norm = facet_normalization(f, n, subset);
    const double bound = normalized_bound(value, norm, n);
    if (bound > r.lower_bound + 1e-12) {
      r.lower_bound = bound;
      r.facet_subset = subset;
      r.facet_k = std::popcount(subset);
      r.facet_xi = value;
      r.facet_normalization = norm;
    }
  }
  return r;
}

FacetValues evaluate_inequality_set(const MomentSummary& m) {
  require_pairs(m);
  const Frame f = principal_frame(m);
  const double n = m.n;
  const double nm1 = n - 1.0;
  FacetValues out;
  out.total_variance = f.variance.sum() - 0.5 * n;
  for (int i = 0; i < 3; ++i) {
    const int k = (i + 1) % 3;
    const int l = (i + 2) % 3;
    out.pair[static_cast<std::size_t>(i)] =
        f.variance(k) + f.variance(l) - f.square(i) / nm1 - n * (n - 2.0) / (4.0 * nm1);
    out.single[static_cast<std::size_t>(i)] =
        f.variance(i) - (f.square(k) + f.square(l)) / nm1 + n / (2.0 * nm1);
  }
  out.casimir = n * (n + 2.0) / 4.0 - f.square.sum();
  return out;
}

}  // namespace sqz
