#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"
#include "squeezent/squeezent.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace {

sqz_state* gibbs(sqz_xxz_params p, double t) {
  sqz_state* s = nullptr;
  REQUIRE(sqz_state_gibbs(&p, t, &s, nullptr) == SQZ_OK);
  return s;
}

std::string take(char* s) {
  std::string out(s);
  sqz_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("version and dense limit") {
  CHECK(std::string(sqz_version()) == "0.1.0");
  CHECK(sqz_dense_limit() >= 6);
}

TEST_CASE("null arguments and last error") {
  sqz_state* s = nullptr;
  CHECK(sqz_state_gibbs(nullptr, 0.5, &s, nullptr) == SQZ_ERR_NULL_ARGUMENT);
  CHECK(std::strlen(sqz_last_error()) > 0);
  sqz_ssi_result r;
  CHECK(sqz_ssi(nullptr, &r) == SQZ_ERR_NULL_ARGUMENT);
  sqz_state_free(nullptr);
  sqz_report_free(nullptr);
  sqz_string_free(nullptr);
}

TEST_CASE("domain errors carry a message") {
  sqz_xxz_params p{1.0, 1.0, 0.0, 1};
  sqz_state* s = nullptr;
  CHECK(sqz_state_gibbs(&p, 0.5, &s, nullptr) == SQZ_ERR_DOMAIN);
  CHECK(s == nullptr);
  p.n = 4;
  CHECK(sqz_state_gibbs(&p, -1.0, &s, nullptr) == SQZ_ERR_DOMAIN);
  CHECK(sqz_state_from_json("{not json", &s) == SQZ_ERR_DOMAIN);
  CHECK(std::string(sqz_last_error()).size() > 0);
  // A successful call leaves the previous message alone but must not fail.
  s = gibbs(p, 0.5);
  sqz_state_free(s);
}

TEST_CASE("state lifecycle and lower bound") {
  sqz_xxz_params p{1.0, 1.0, 0.0, 2};
  sqz_state* s = nullptr;
  double log_z = 0.0;
  REQUIRE(sqz_state_gibbs(&p, 0.5, &s, &log_z) == SQZ_OK);
  CHECK(log_z == doctest::Approx(std::log1p(3.0 * std::exp(-2.0))));
  int n = 0;
  CHECK(sqz_state_num_particles(s, &n) == SQZ_OK);
  CHECK(n == 2);
  sqz_ssi_result r;
  REQUIRE(sqz_ssi(s, &r) == SQZ_OK);
  const double triplet = 3.0 * std::exp(-2.0) / (1.0 + 3.0 * std::exp(-2.0));
  CHECK(r.lower_bound == doctest::Approx(1.0 - 2.0 * triplet));
  sqz_facets f;
  CHECK(sqz_inequalities(s, &f) == SQZ_OK);
  CHECK(f.total_variance == doctest::Approx(r.xi));

  char* text = nullptr;
  REQUIRE(sqz_state_to_json(s, &text) == SQZ_OK);
  const auto json = take(text);
  sqz_state* back = nullptr;
  REQUIRE(sqz_state_from_json(json.c_str(), &back) == SQZ_OK);
  char* again = nullptr;
  REQUIRE(sqz_state_to_json(back, &again) == SQZ_OK);
  CHECK(take(again) == json);
  sqz_state_free(back);
  sqz_state_free(s);
}

TEST_CASE("sweep and threshold") {
  const sqz_xxz_params p{1.0, 1.0, 0.0, 2};
  const std::vector<double> temps{0.2, 0.5, 1.5};
  std::vector<sqz_lower_row> rows(temps.size());
  REQUIRE(sqz_lower_sweep(&p, temps.data(), temps.size(), 2, rows.data()) == SQZ_OK);
  CHECK(rows[0].lower_bound > rows[1].lower_bound);
  CHECK(rows[2].lower_bound == 0.0);
  sqz_threshold_result t;
  REQUIRE(sqz_threshold(&p, 1e-3, 0.0, 1e-9, &t) == SQZ_OK);
  CHECK(t.found == 1);
  CHECK(std::abs(t.temperature - 1.0 / std::log(3.0)) < 1e-6);
  double xxx = 0.0;
  double xx = 0.0;
  REQUIRE(sqz_asymptotic_bounds(1.0, 0.25, &xxx, &xx) == SQZ_OK);
  CHECK(xx == doctest::Approx(1.0 - 4.0 * 0.25 / 1.5));
}

TEST_CASE("upper bounds and certificates") {
  sqz_state* target = gibbs({1.0, 1.0, 0.0, 3}, 0.5);
  sqz_ssi_result lower;
  REQUIRE(sqz_ssi(target, &lower) == SQZ_OK);

  sqz_report* simple = nullptr;
  REQUIRE(sqz_upper_simple(target, nullptr, 0, nullptr, 0, &simple) == SQZ_OK);
  sqz_full_options o;
  sqz_full_options_default(&o);
  o.seed = 7;
  o.restarts = 2;
  sqz_report* full = nullptr;
  REQUIRE(sqz_upper_full(target, &o, simple, &full) == SQZ_OK);

  sqz_report_summary sf;
  REQUIRE(sqz_report_summary_get(full, &sf) == SQZ_OK);
  CHECK(sf.seed == 7);
  CHECK(sf.members > 0);
  CHECK(sf.t_bsa >= lower.lower_bound - 1e-9);
  CHECK(sf.t_bsa - lower.lower_bound < 0.01);

  double lo = 0.0;
  double hi = 0.0;
  CHECK(sqz_sandwich(target, full, &lo, &hi) == SQZ_OK);
  CHECK(lo <= hi + 1e-9);

  char* text = nullptr;
  REQUIRE(sqz_report_to_json(full, &text) == SQZ_OK);
  const auto json = take(text);
  sqz_report* back = nullptr;
  REQUIRE(sqz_report_from_json(json.c_str(), &back) == SQZ_OK);
  sqz_certificate_check c;
  REQUIRE(sqz_verify_certificate(target, back, &c) == SQZ_OK);
  CHECK(c.sigma_error < 1e-10);
  CHECK(c.t_error < 1e-10);
  CHECK(c.min_remainder >= -1e-12);

  sqz_state* sigma = nullptr;
  REQUIRE(sqz_report_sigma(back, &sigma) == SQZ_OK);
  sqz_state_free(sigma);

  // Move one member so the ensemble no longer reproduces the stored sigma.
  auto j = nlohmann::json::parse(json);
  auto& first = j["ensemble"][0];
  if (first.contains("product"))
    first["product"]["bloch"][0][2] = -first["product"]["bloch"][0][2].get<double>() + 0.3;
  else
    first["simple"]["theta"] = first["simple"]["theta"].get<double>() + 0.3;
  sqz_report* tampered = nullptr;
  CHECK(sqz_report_from_json(j.dump().c_str(), &tampered) == SQZ_ERR_INTEGRITY);
  CHECK(tampered == nullptr);
  CHECK(sqz_report_from_json("{\"sigma\": 3}", &tampered) == SQZ_ERR_DOMAIN);

  sqz_report_free(back);
  sqz_report_free(full);
  sqz_report_free(simple);
  sqz_state_free(target);
}

TEST_CASE("dense ansatz beyond the limit is a capability error") {
  const int n = sqz_dense_limit() + 1;
  sqz_state* target = gibbs({1.0, 1.0, 0.0, n}, 0.5);
  sqz_full_options o;
  sqz_full_options_default(&o);
  sqz_report* r = nullptr;
  CHECK(sqz_upper_full(target, &o, nullptr, &r) == SQZ_ERR_CAPABILITY);
  CHECK(r == nullptr);
  sqz_state_free(target);
}

TEST_CASE("selftest through the C API") {
  char* report = nullptr;
  int passed = 0;
  REQUIRE(sqz_selftest(1.0, nullptr, &report, &passed) == SQZ_OK);
  CHECK(passed == 1);
  CHECK(take(report).find("multiplicity_sum") != std::string::npos);
  const auto path = (std::filesystem::temp_directory_path() / "squeezent_capi_cache.bin").string();
  CHECK(sqz_schur_cache_write(3, path.c_str()) == SQZ_OK);
  CHECK(sqz_schur_cache_write(3, "/nonexistent-dir/x/cache.bin") == SQZ_ERR_IO);
  std::filesystem::remove(path);
}
