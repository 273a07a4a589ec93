#include "squeezent/selftest.hpp"

#include "squeezent/errors.hpp"
#include "squeezent/schur_basis.hpp"
#include "squeezent/sep_approx.hpp"
#include "squeezent/ssi_witness.hpp"
#include "squeezent/thermal_model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace sqz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd dense_gibbs(const XXZParams& params, double temperature) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_hamiltonian(params));
  const Eigen::VectorXd e = solver.eigenvalues();
  const Eigen::VectorXd w = (-(e.array() - e.minCoeff()) / temperature).exp();
  const Eigen::MatrixXd& v = solver.eigenvectors();
  return v * (w / w.sum()).asDiagonal() * v.transpose();
}

MomentSummary dense_moments(const Eigen::MatrixXd& rho, const std::array<Eigen::MatrixXcd, 3>& spin, int n) {
  MomentSummary m;
  m.n = n;
  const Eigen::MatrixXcd r = rho.cast<std::complex<double>>();
  for (int k = 0; k < 3; ++k) {
    m.mean(k) = (r * spin[static_cast<std::size_t>(k)]).trace().real();
    for (int l = 0; l < 3; ++l) {
      const auto& a = spin[static_cast<std::size_t>(k)];
      const auto& b = spin[static_cast<std::size_t>(l)];
      m.second(k, l) = 0.5 * (r * (a * b + b * a)).trace().real();
    }
  }
  return m;
}

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

XXZParams random_params(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return XXZParams{u(rng), u(rng), u(rng), n};
}

double random_temperature(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(std::log(0.05), std::log(5.0));
  return std::exp(u(rng));
}

struct Collector {
  double worst = 0.0;
  std::string detail;
  void add(double err, const std::string& where) {
    if (!(err <= worst)) {
      worst = std::isnan(err) ? kInf : err;
      detail = where;
    }
  }
};

SelftestCheck make_check(std::string name, const Collector& c, double tolerance, double tighten) {
  SelftestCheck out;
  out.name = std::move(name);
  out.measured = c.worst;
  out.tolerance = tolerance;
  out.passed = c.worst <= tolerance;
  out.marginal = out.passed && c.worst > tolerance / tighten;
  out.detail = c.detail;
  return out;
}

SelftestCheck failed_check(std::string name, double tolerance, const std::string& why) {
  SelftestCheck out;
  out.name = std::move(name);
  out.measured = kInf;
  out.tolerance = tolerance;
  out.detail = why;
  return out;
}

template <typename F>
SelftestCheck guarded(const std::string& name, double tolerance, double tighten, F&& body) {
  try {
    Collector c;
    body(c);
    return make_check(name, c, tolerance, tighten);
  } catch (const std::exception& e) {
    return failed_check(name, tolerance, e.what());
  }
}

}  // namespace

bool SelftestReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SelftestCheck& c) { return c.passed; });
}

SelftestReport run_selftest(const SelftestOptions& options) {
  if (!(options.tighten >= 1.0)) throw DomainError("tighten factor must be >= 1");
  const double tighten = options.tighten;
  const int max_n = std::clamp(options.max_dense_n, 2, dense_limit());
  std::mt19937_64 rng(20240521);
  SelftestReport report;

  report.checks.push_back(guarded("multiplicity_sum", 0.0, tighten, [&](Collector& c) {
    for (int n = 1; n <= 40; ++n) {
      std::uint64_t total = 0;
      for (int two_j = n % 2; two_j <= n; two_j += 2)
        total += multiplicity(n, two_j) * static_cast<std::uint64_t>(two_j + 1);
      c.add(total == (std::uint64_t{1} << n) ? 0.0 : 1.0, "N=" + std::to_string(n));
    }
  }));

  report.checks.push_back(guarded("wigner_orthogonality", 1e-12, tighten, [&](Collector& c) {
    for (int two_j : {1, 2, 7, 40, 201})
      for (double theta : {0.3, 1.1, 2.9}) {
        const auto w = wigner_d(two_j, theta);
        const auto d = static_cast<Eigen::Index>(two_j + 1);
        c.add(max_abs(w.d.transpose() * w.d - Eigen::MatrixXd::Identity(d, d)),
              "2J=" + std::to_string(two_j) + " theta=" + std::to_string(theta));
      }
  }));

  report.checks.push_back(guarded("jz_product_trace", 1e-12, tighten, [&](Collector& c) {
    for (int n : {2, 5, 17, 60, 200})
      for (int k : {0, n / 3, n / 2, n}) c.add(std::abs(jz_product_state_blocks(n, k).trace() - 1.0),
                                             "N=" + std::to_string(n) + " K=" + std::to_string(k));
  }));

  std::vector<SchurBasis> bases;
  report.checks.push_back(guarded("schur_completeness", 1e-10, tighten, [&](Collector& c) {
    for (int n = 1; n <= max_n; ++n) {
      bases.push_back(SchurBasis::build(n));
      c.add(bases.back().completeness_error(), "N=" + std::to_string(n));
    }
  }));

  report.checks.push_back(guarded("schur_cache", 1e-10, tighten, [&](Collector& c) {
    if (options.schur_cache) {
      const auto basis = read_schur_cache(*options.schur_cache);
      c.add(basis.completeness_error(), options.schur_cache->string());
      return;
    }
    const auto path = std::filesystem::temp_directory_path() /
                      ("squeezent_selftest_" + std::to_string(std::random_device{}()) + ".bin");
    const auto built = SchurBasis::build(std::min(4, max_n));
    write_schur_cache(built, path);
    const auto back = read_schur_cache(path);
    std::filesystem::remove(path);
    c.add(max_abs(back.to_dense(BlockDiagonalState::maximally_mixed(back.num_particles())) -
                  built.to_dense(BlockDiagonalState::maximally_mixed(built.num_particles()))),
          "round trip");
    c.add(back.completeness_error(), "round trip completeness");
  }));

  report.checks.push_back(guarded("dense_gibbs", 1e-10, tighten, [&](Collector& c) {
    for (int n = 2; n <= max_n; ++n)
      for (int draw = 0; draw < 4; ++draw) {
        const auto p = random_params(rng, n);
        const double t = random_temperature(rng);
        const auto& basis = bases.at(static_cast<std::size_t>(n - 1));
        c.add(max_abs(basis.to_dense(gibbs_blocks(p, t).state) - dense_gibbs(p, t)), "N=" + std::to_string(n));
      }
  }));

  report.checks.push_back(guarded("dense_moments", 1e-10, tighten, [&](Collector& c) {
    for (int n = 2; n <= max_n; ++n) {
      const auto spin = dense_collective_spin(n);
      for (int draw = 0; draw < 4; ++draw) {
        const auto p = random_params(rng, n);
        const double t = random_temperature(rng);
        const auto blocks = moments_from_blocks(gibbs_blocks(p, t).state);
        const auto dense = dense_moments(dense_gibbs(p, t), spin, n);
        const std::string where = "N=" + std::to_string(n);
        c.add((blocks.mean - dense.mean).cwiseAbs().maxCoeff(), where);
        c.add((blocks.second - dense.second).cwiseAbs().maxCoeff(), where);
        c.add(std::abs(ssi_parameter(blocks).xi - ssi_parameter(dense).xi), where + " xi");
        c.add(std::abs(ssi_parameter(blocks).lower_bound - ssi_parameter(dense).lower_bound), where + " bound");
      }
    }
  }));

  report.checks.push_back(guarded("two_norm_distance", 1e-10, tighten, [&](Collector& c) {
    for (int n = 2; n <= max_n; ++n)
      for (int draw = 0; draw < 4; ++draw) {
        const auto p = random_params(rng, n);
        const double t1 = random_temperature(rng);
        const double t2 = random_temperature(rng);
        const double blocks = two_norm_distance(gibbs_blocks(p, t1).state, gibbs_blocks(p, t2).state);
        const double dense = (dense_gibbs(p, t1) - dense_gibbs(p, t2)).squaredNorm();
        c.add(std::abs(blocks - dense), "N=" + std::to_string(n));
      }
  }));

  report.checks.push_back(guarded("normalization_identities", 1e-10, tighten, [&](Collector& c) {
    for (int n : {2, 4, 8, 20}) {
      const std::string where = "N=" + std::to_string(n);
      const auto singlet = ssi_parameter(moments_from_blocks(BlockDiagonalState::basis_cell(n, 0, 0)));
      const auto dicke = ssi_parameter(moments_from_blocks(BlockDiagonalState::basis_cell(n, n, 0)));
      c.add(std::abs(singlet.lower_bound - 1.0), where + " singlet");
      c.add(std::abs(dicke.lower_bound - 1.0), where + " Dicke");
      c.add(std::abs(singlet.normalization - closed_form_normalization(n, singlet.k)), where + " singlet B_K");
      c.add(std::abs(dicke.normalization - closed_form_normalization(n, dicke.k)), where + " Dicke B_K");
    }
  }));

  report.checks.push_back(guarded("witness_validity", 1e-10, tighten, [&](Collector& c) {
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int n : {2, 3, 4, 5, 6, 7, 8, 9, 10, 200}) {
      const int draws = n == 200 ? 4 : 30;
      for (int draw = 0; draw < draws; ++draw) {
        const int members = 1 + static_cast<int>(rng() % 3);
        std::vector<BlockDiagonalState> states;
        std::vector<double> weights;
        for (int i = 0; i < members; ++i) {
          states.push_back(derive_blocks(n, SimpleAnsatz{static_cast<int>(rng() % (n + 1)), angle(rng)}));
          weights.push_back(unit(rng) + 1e-3);
        }
        double total = 0.0;
        for (double w : weights) total += w;
        for (double& w : weights) w /= total;
        const auto m = moments_from_blocks(mix(states, weights));
        const std::string where = "N=" + std::to_string(n);
        c.add(std::max(0.0, -evaluate_inequality_set(m).min_value()), where + " facet");
        c.add(ssi_parameter(m).lower_bound, where + " bound");
      }
    }
  }));

  return report;
}

}  // namespace sqz
