#include "squeezent/squeezent.h"

#include "squeezent/errors.hpp"
#include "squeezent/schur_basis.hpp"
#include "squeezent/selftest.hpp"
#include "squeezent/sep_approx.hpp"
#include "squeezent/serialization.hpp"
#include "squeezent/ssi_witness.hpp"
#include "squeezent/sweep.hpp"
#include "squeezent/thermal_model.hpp"

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <string>

struct sqz_state {
  sqz::BlockDiagonalState value;
};

struct sqz_report {
  sqz::UpperBoundReport value;
};

namespace {

thread_local std::string last_error;

sqz_status fail(sqz_status status, const char* what) {
  last_error = what;
  return status;
}

template <typename F>
sqz_status guard(F&& body) {
  try {
    body();
    return SQZ_OK;
  } catch (const sqz::DomainError& e) {
    return fail(SQZ_ERR_DOMAIN, e.what());
  } catch (const sqz::CapabilityError& e) {
    return fail(SQZ_ERR_CAPABILITY, e.what());
  } catch (const sqz::IntegrityError& e) {
    return fail(SQZ_ERR_INTEGRITY, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(SQZ_ERR_DOMAIN, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(SQZ_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(SQZ_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SQZ_ERR_INTERNAL, "unknown exception");
  }
}

#define SQZ_REQUIRE(ptr)                                                    \
  do {                                                                      \
    if ((ptr) == nullptr) return fail(SQZ_ERR_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

char* copy_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sqz::XXZParams convert(const sqz_xxz_params& p) {
  sqz::XXZParams out{p.g, p.gz, p.h, p.n};
  out.validate();
  return out;
}

// Schur bases are costly to build and immutable, so they are shared.
std::shared_ptr<const sqz::SchurBasis> basis_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const sqz::SchurBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const sqz::SchurBasis>(sqz::SchurBasis::build(n));
  return slot;
}

bool needs_basis(const sqz::UpperBoundReport& r) {
  for (const auto& m : r.ensemble)
    if (std::holds_alternative<sqz::GeneralProduct>(m.descriptor)) return true;
  return false;
}

}  // namespace

extern "C" {

const char* sqz_version(void) { return sqz::kVersion; }

const char* sqz_last_error(void) { return last_error.c_str(); }

void sqz_string_free(char* s) { std::free(s); }

int sqz_dense_limit(void) { return sqz::dense_limit(); }

sqz_status sqz_state_gibbs(const sqz_xxz_params* params, double temperature, sqz_state** out, double* log_z) {
  SQZ_REQUIRE(params);
  SQZ_REQUIRE(out);
  return guard([&] {
    auto point = sqz::gibbs_blocks(convert(*params), temperature);
    if (log_z != nullptr) *log_z = point.log_z;
    *out = new sqz_state{std::move(point.state)};
  });
}

sqz_status sqz_state_from_json(const char* json, sqz_state** out) {
  SQZ_REQUIRE(json);
  SQZ_REQUIRE(out);
  return guard([&] { *out = new sqz_state{sqz::state_from_json(nlohmann::json::parse(json))}; });
}

sqz_status sqz_state_to_json(const sqz_state* state, char** out) {
  SQZ_REQUIRE(state);
  SQZ_REQUIRE(out);
  return guard([&] { *out = copy_string(sqz::state_to_json(state->value).dump()); });
}

sqz_status sqz_state_num_particles(const sqz_state* state, int* n) {
  SQZ_REQUIRE(state);
  SQZ_REQUIRE(n);
  *n = state->value.num_particles();
  return SQZ_OK;
}

void sqz_state_free(sqz_state* state) { delete state; }

sqz_status sqz_ssi(const sqz_state* state, sqz_ssi_result* out) {
  SQZ_REQUIRE(state);
  SQZ_REQUIRE(out);
  return guard([&] {
    const auto r = sqz::ssi_parameter(sqz::moments_from_blocks(state->value));
    *out = sqz_ssi_result{r.k,
                          r.xi,
                          r.normalization,
                          r.closed_form_normalization,
                          r.facet_subset,
                          r.facet_k,
                          r.facet_xi,
                          r.facet_normalization,
                          r.lower_bound,
                          {r.x_eigenvalues(0), r.x_eigenvalues(1), r.x_eigenvalues(2)}};
  });
}

sqz_status sqz_ssi_json(const sqz_state* state, char** out) {
  SQZ_REQUIRE(state);
  SQZ_REQUIRE(out);
  return guard([&] {
    *out = copy_string(sqz::ssi_to_json(sqz::ssi_parameter(sqz::moments_from_blocks(state->value))).dump());
  });
}

sqz_status sqz_inequalities(const sqz_state* state, sqz_facets* out) {
  SQZ_REQUIRE(state);
  SQZ_REQUIRE(out);
  return guard([&] {
    const auto f = sqz::evaluate_inequality_set(sqz::moments_from_blocks(state->value));
    *out = sqz_facets{f.total_variance, {f.pair[0], f.pair[1], f.pair[2]}, {f.single[0], f.single[1], f.single[2]},
                      f.casimir};
  });
}

sqz_status sqz_lower_sweep(const sqz_xxz_params* params, const double* temperatures, size_t count, int jobs,
                           sqz_lower_row* rows) {
  SQZ_REQUIRE(params);
  if (count > 0) {
    SQZ_REQUIRE(temperatures);
    SQZ_REQUIRE(rows);
  }
  return guard([&] {
    const auto result =
        sqz::lower_sweep(convert(*params), std::vector<double>(temperatures, temperatures + count), jobs);
    for (std::size_t i = 0; i < count; ++i) {
      const auto& r = result[i];
      rows[i] = sqz_lower_row{r.temperature, r.log_z, r.mean_jz, r.jz2, r.jx2, r.xi, r.k, r.lower_bound};
    }
  });
}

sqz_status sqz_threshold(const sqz_xxz_params* params, double t_lo, double t_hi, double tol,
                         sqz_threshold_result* out) {
  SQZ_REQUIRE(params);
  SQZ_REQUIRE(out);
  return guard([&] {
    const auto r = sqz::entanglement_threshold(convert(*params), t_lo, t_hi, tol);
    *out = sqz_threshold_result{r.found ? 1 : 0, r.left, r.right, r.temperature};
  });
}

sqz_status sqz_asymptotic_bounds(double g, double temperature, double* xxx, double* xx) {
  SQZ_REQUIRE(xxx);
  SQZ_REQUIRE(xx);
  return guard([&] {
    *xxx = sqz::asymptotic_xxx_bound(g, temperature);
    *xx = sqz::asymptotic_xx_bound(temperature);
  });
}

sqz_status sqz_upper_simple(const sqz_state* target, const int* k_set, size_t k_count, const double* thetas,
                            size_t theta_count, sqz_report** out) {
  SQZ_REQUIRE(target);
  SQZ_REQUIRE(out);
  return guard([&] {
    const int n = target->value.num_particles();
    const auto ks = k_set != nullptr ? std::vector<int>(k_set, k_set + k_count) : sqz::default_k_set(n);
    const auto th = thetas != nullptr ? std::vector<double>(thetas, thetas + theta_count) : sqz::default_theta_grid();
    *out = new sqz_report{sqz::upper_bound_simple(target->value, ks, th)};
  });
}

void sqz_full_options_default(sqz_full_options* options) {
  if (options == nullptr) return;
  const sqz::FullOptions d;
  *options = sqz_full_options{d.restarts, d.seed, d.max_outer, d.max_sweeps, d.tolerance, d.ball_check ? 1 : 0,
                              d.ball_radius};
}

sqz_status sqz_upper_full(const sqz_state* target, const sqz_full_options* options, const sqz_report* warm_start,
                          sqz_report** out) {
  SQZ_REQUIRE(target);
  SQZ_REQUIRE(out);
  return guard([&] {
    const int n = target->value.num_particles();
    if (n > sqz::dense_limit())
      throw sqz::CapabilityError("full ansatz needs N <= " + std::to_string(sqz::dense_limit()) + " (got " +
                                 std::to_string(n) + ")");
    sqz::FullOptions opts;
    if (options != nullptr) {
      opts.restarts = options->restarts;
      opts.seed = options->seed;
      opts.max_outer = options->max_outer;
      opts.max_sweeps = options->max_sweeps;
      opts.tolerance = options->tolerance;
      opts.ball_check = options->ball_check != 0;
      opts.ball_radius = options->ball_radius;
    }
    if (warm_start != nullptr) {
      if (warm_start->value.sigma.num_particles() != n) throw sqz::DomainError("warm start has a different N");
      opts.warm_start = warm_start->value.ensemble;
    }
    *out = new sqz_report{sqz::upper_bound_full(target->value, *basis_for(n), opts)};
  });
}

sqz_status sqz_report_summary_get(const sqz_report* report, sqz_report_summary* out) {
  SQZ_REQUIRE(report);
  SQZ_REQUIRE(out);
  const auto& r = report->value;
  *out = sqz_report_summary{r.t_bsa,
                            r.residual_two_norm,
                            r.iterations,
                            static_cast<sqz_termination>(r.termination),
                            r.seed,
                            r.ensemble.size(),
                            r.ball_certified ? 1 : 0};
  return SQZ_OK;
}

sqz_status sqz_report_sigma(const sqz_report* report, sqz_state** out) {
  SQZ_REQUIRE(report);
  SQZ_REQUIRE(out);
  return guard([&] { *out = new sqz_state{report->value.sigma}; });
}

sqz_status sqz_report_to_json(const sqz_report* report, char** out) {
  SQZ_REQUIRE(report);
  SQZ_REQUIRE(out);
  return guard([&] { *out = copy_string(sqz::report_to_json(report->value).dump()); });
}

sqz_status sqz_report_from_json(const char* json, sqz_report** out) {
  SQZ_REQUIRE(json);
  SQZ_REQUIRE(out);
  return guard([&] {
    const auto j = nlohmann::json::parse(json);
    std::shared_ptr<const sqz::SchurBasis> basis;
    bool product = false;
    for (const auto& item : j.at("ensemble")) product = product || item.contains("product");
    if (product) basis = basis_for(j.at("sigma").at("N").get<int>());
    *out = new sqz_report{sqz::report_from_json(j, basis.get())};
  });
}

void sqz_report_free(sqz_report* report) { delete report; }

sqz_status sqz_verify_certificate(const sqz_state* target, const sqz_report* report, sqz_certificate_check* out) {
  SQZ_REQUIRE(target);
  SQZ_REQUIRE(report);
  SQZ_REQUIRE(out);
  return guard([&] {
    std::shared_ptr<const sqz::SchurBasis> basis;
    if (needs_basis(report->value)) basis = basis_for(target->value.num_particles());
    const auto c = sqz::verify_certificate(target->value, report->value, basis.get());
    *out = sqz_certificate_check{c.member_error, c.sigma_error, c.t_error, c.weight_sum_error, c.min_remainder};
  });
}

sqz_status sqz_sandwich(const sqz_state* target, const sqz_report* report, double* lower, double* upper) {
  SQZ_REQUIRE(target);
  SQZ_REQUIRE(report);
  return guard([&] {
    const auto ssi = sqz::ssi_parameter(sqz::moments_from_blocks(target->value));
    const auto s = sqz::sandwich_report(target->value, ssi, report->value);
    if (lower != nullptr) *lower = s.lower;
    if (upper != nullptr) *upper = s.upper;
  });
}

sqz_status sqz_selftest(double tighten, const char* schur_cache, char** report_json, int* all_passed) {
  SQZ_REQUIRE(report_json);
  SQZ_REQUIRE(all_passed);
  return guard([&] {
    sqz::SelftestOptions opts;
    opts.tighten = tighten;
    if (schur_cache != nullptr) opts.schur_cache = schur_cache;
    const auto report = sqz::run_selftest(opts);
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks)
      checks.push_back({{"name", c.name},
                        {"measured", c.measured},
                        {"tolerance", c.tolerance},
                        {"passed", c.passed},
                        {"marginal", c.marginal},
                        {"detail", c.detail}});
    *all_passed = report.all_passed() ? 1 : 0;
    *report_json = copy_string(nlohmann::json{{"tighten", tighten}, {"checks", checks}}.dump());
  });
}

sqz_status sqz_schur_cache_write(int n, const char* path) {
  SQZ_REQUIRE(path);
  return guard([&] { sqz::write_schur_cache(*basis_for(n), path); });
}

}  // extern "C"
