// squeezent command-line front end. Talks to the library only through the C API.

#include "squeezent/squeezent.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kCapability = 3, kIntegrity = 4, kSelftest = 5 };

struct Failure {
  int code;
  std::string message;
};

int exit_code(sqz_status s) {
  switch (s) {
    case SQZ_OK:
      return kOk;
    case SQZ_ERR_DOMAIN:
    case SQZ_ERR_NULL_ARGUMENT:
    case SQZ_ERR_IO:
      return kUsage;
    case SQZ_ERR_CAPABILITY:
      return kCapability;
    case SQZ_ERR_INTEGRITY:
      return kIntegrity;
    default:
      return kInternal;
  }
}

void check(sqz_status s) {
  if (s != SQZ_OK) throw Failure{exit_code(s), sqz_last_error()};
}

struct StateDeleter {
  void operator()(sqz_state* s) const { sqz_state_free(s); }
};
struct ReportDeleter {
  void operator()(sqz_report* r) const { sqz_report_free(r); }
};
using StatePtr = std::unique_ptr<sqz_state, StateDeleter>;
using ReportPtr = std::unique_ptr<sqz_report, ReportDeleter>;

std::string take_string(char* s) {
  std::string out(s);
  sqz_string_free(s);
  return out;
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kUsage, "cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// key=value lines, '#' comments. Keys are long flag names without dashes and
// are routed to the selected subcommand unless the main program owns them.
class KeyValueConfig : public CLI::Config {
 public:
  KeyValueConfig(const CLI::App* app, std::string section) : app_(app), section_(std::move(section)) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return {}; }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    std::vector<CLI::ConfigItem> items;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw CLI::ConfigError("config line " + std::to_string(number) + " is not key=value");
      CLI::ConfigItem item;
      item.name = trim(line.substr(0, eq));
      item.inputs = {trim(line.substr(eq + 1))};
      if (app_->get_option_no_throw("--" + item.name) == nullptr && !section_.empty()) item.parents = {section_};
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  const CLI::App* app_;
  std::string section_;
};

struct Common {
  int jobs = 1;
  bool no_timestamp = false;
};

struct Model {
  double g = 1.0;
  double gz = 1.0;
  double h = 0.0;
  int n = 2;
  sqz_xxz_params c() const { return sqz_xxz_params{g, gz, h, n}; }
};

void add_model(CLI::App* sub, Model& m) {
  // -h is taken by the field option here.
  sub->set_help_flag("--help", "print this help message and exit");
  sub->add_option("-N,--N", m.n, "particle number")->capture_default_str();
  sub->add_option("--g", m.g, "XY coupling")->capture_default_str();
  sub->add_option("--gz", m.gz, "Z coupling")->capture_default_str();
  sub->add_option("--h", m.h, "field along z")->capture_default_str();
}

std::string describe(const Model& m) {
  return "g=" + num(m.g) + " gz=" + num(m.gz) + " h=" + num(m.h) + " N=" + std::to_string(m.n);
}

void write_header(std::ostream& out, const Common& common, const std::vector<std::string>& notes) {
  out << "# squeezent v" << sqz_version() << " schema 1\n";
  if (!common.no_timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated " << buf << "\n";
  }
  for (const auto& note : notes) out << "# " << note << "\n";
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw Failure{kUsage, "cannot write " + path};
    }
  }
  std::ostream& operator*() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<double> grid(double lo, double hi, int steps, bool log_scale) {
  std::vector<double> out;
  for (int i = 0; i < steps; ++i) {
    const double f = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    out.push_back(log_scale ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo));
  }
  if (steps > 1) out.back() = hi;
  return out;
}

std::vector<sqz_lower_row> sweep(const Model& m, const std::vector<double>& temps, int jobs) {
  const auto p = m.c();
  std::vector<sqz_lower_row> rows(temps.size());
  check(sqz_lower_sweep(&p, temps.data(), temps.size(), jobs, rows.data()));
  return rows;
}

sqz_threshold_result threshold(const Model& m, double tol) {
  const auto p = m.c();
  sqz_threshold_result r{};
  check(sqz_threshold(&p, 1e-3, 0.0, tol, &r));
  return r;
}

StatePtr gibbs(const Model& m, double t) {
  const auto p = m.c();
  sqz_state* s = nullptr;
  check(sqz_state_gibbs(&p, t, &s, nullptr));
  return StatePtr(s);
}

const char* termination_name(sqz_termination t) {
  switch (t) {
    case SQZ_CONVERGED:
      return "converged";
    case SQZ_BALL_REACHED:
      return "ball_reached";
    default:
      return "max_iterations";
  }
}

struct UpperOptions {
  std::string ansatz = "full";
  std::optional<std::uint64_t> seed;
  int restarts = 8;
  int max_outer = 100;
  int max_sweeps = 200;
  double tolerance = 1e-12;
  bool ball_check = false;
  int theta_points = 32;
};

struct UpperPoint {
  double lower = 0.0;
  sqz_report_summary summary{};
  ReportPtr report;
};

// Runs one upper bound and checks it against the lower bound and its own
// certificate; any contradiction is an integrity failure.
UpperPoint upper_point(const sqz_state* target, const UpperOptions& o, std::uint64_t seed,
                       const sqz_report* warm) {
  sqz_report* raw = nullptr;
  if (o.ansatz == "simple") {
    std::vector<double> thetas;
    for (int i = 0; i < o.theta_points; ++i)
      thetas.push_back(o.theta_points == 1 ? 0.0 : std::numbers::pi * i / (o.theta_points - 1));
    check(sqz_upper_simple(target, nullptr, 0, thetas.data(), thetas.size(), &raw));
  } else {
    sqz_full_options f;
    sqz_full_options_default(&f);
    f.restarts = o.restarts;
    f.seed = seed;
    f.max_outer = o.max_outer;
    f.max_sweeps = o.max_sweeps;
    f.tolerance = o.tolerance;
    f.ball_check = o.ball_check ? 1 : 0;
    check(sqz_upper_full(target, &f, warm, &raw));
  }
  UpperPoint out;
  out.report.reset(raw);
  check(sqz_report_summary_get(raw, &out.summary));
  double upper = 0.0;
  check(sqz_sandwich(target, raw, &out.lower, &upper));
  sqz_certificate_check c{};
  check(sqz_verify_certificate(target, raw, &c));
  if (c.sigma_error > 1e-10 || c.member_error > 1e-10 || c.t_error > 1e-10 || c.min_remainder < -1e-12)
    throw Failure{kIntegrity, "certificate does not re-verify (sigma error " + num(c.sigma_error) +
                                  ", min remainder " + num(c.min_remainder) + ")"};
  return out;
}

std::uint64_t choose_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// ---- lower -------------------------------------------------------------

struct LowerArgs {
  Model model;
  double t_min = 0.05;
  double t_max = 2.0;
  int steps = 40;
  std::string scale = "linear";
  bool ground = false;
  double threshold_tol = 1e-6;
  bool no_threshold = false;
  std::string output;
};

int run_lower(const LowerArgs& a, const Common& common) {
  if (!(a.t_min > 0.0)) throw Failure{kUsage, "--tmin must be > 0 (use --ground for the T = 0 point)"};
  if (!(a.t_max >= a.t_min) || a.steps < 1) throw Failure{kUsage, "need tmax >= tmin and steps >= 1"};
  auto temps = grid(a.t_min, a.t_max, a.steps, a.scale == "log");
  if (a.ground) temps.insert(temps.begin(), 0.0);
  const auto rows = sweep(a.model, temps, common.jobs);
  std::optional<sqz_threshold_result> thr;
  if (!a.no_threshold) thr = threshold(a.model, a.threshold_tol);

  Output out(a.output);
  write_header(*out, common,
               {"lower bounds " + describe(a.model),
                "grid " + a.scale + " T in [" + num(a.t_min) + ", " + num(a.t_max) + "] steps " +
                    std::to_string(a.steps) + (a.ground ? " plus T=0" : "")});
  *out << "T,logZ,Jz,Jz2,Jx2,xi,K,lower_bound\n";
  for (const auto& r : rows)
    *out << num(r.temperature) << ',' << num(r.log_z) << ',' << num(r.mean_jz) << ',' << num(r.jz2) << ','
         << num(r.jx2) << ',' << num(r.xi) << ',' << r.k << ',' << num(r.lower_bound) << '\n';
  if (thr) {
    if (thr->found)
      *out << "# threshold T*=" << num(thr->temperature) << " bracket=[" << num(thr->left) << ", "
           << num(thr->right) << "]\n";
    else if (thr->left > 0.0)
      *out << "# threshold above T=" << num(thr->left) << " (still entangled at the top of the search range)\n";
    else
      *out << "# threshold none (no entanglement detected above T=0.001)\n";
  }
  return kOk;
}

// ---- upper -------------------------------------------------------------

struct UpperArgs {
  Model model;
  double temperature = 1.0;
  UpperOptions opts;
  std::string warm_start;
  std::string certificate;
  std::string output;
};

int run_upper(const UpperArgs& a, const Common& common) {
  if (a.opts.ansatz != "simple" && a.opts.ansatz != "full") throw Failure{kUsage, "--ansatz is simple or full"};
  const auto target = gibbs(a.model, a.temperature);
  ReportPtr warm;
  if (!a.warm_start.empty()) {
    sqz_report* raw = nullptr;
    check(sqz_report_from_json(read_file(a.warm_start).c_str(), &raw));
    warm.reset(raw);
  }
  const std::uint64_t seed = a.opts.ansatz == "full" ? choose_seed(a.opts.seed) : 0;
  const auto p = upper_point(target.get(), a.opts, seed, warm.get());

  if (!a.certificate.empty()) {
    char* json = nullptr;
    check(sqz_report_to_json(p.report.get(), &json));
    auto j = nlohmann::json::parse(take_string(json));
    j["model"] = {{"N", a.model.n}, {"g", a.model.g}, {"gz", a.model.gz}, {"h", a.model.h}};
    j["temperature"] = a.temperature;
    j["lower_bound"] = p.lower;
    std::ofstream f(a.certificate);
    if (!f) throw Failure{kUsage, "cannot write " + a.certificate};
    f << j.dump(1) << '\n';
  }

  Output out(a.output);
  write_header(*out, common, {"upper bound " + describe(a.model) + " ansatz " + a.opts.ansatz});
  *out << "T,ansatz,t_bsa,lower_bound,gap,residual_two_norm,termination,iterations,members,seed\n";
  *out << num(a.temperature) << ',' << a.opts.ansatz << ',' << num(p.summary.t_bsa) << ',' << num(p.lower) << ','
       << num(p.summary.t_bsa - p.lower) << ',' << num(p.summary.residual_two_norm) << ','
       << termination_name(p.summary.termination) << ',' << p.summary.iterations << ',' << p.summary.members
       << ',' << p.summary.seed << '\n';
  return kOk;
}

// ---- inequalities ------------------------------------------------------

struct InequalityArgs {
  Model model;
  double temperature = 1.0;
  std::string state;
  std::string output;
};

int run_inequalities(const InequalityArgs& a, const Common& common) {
  StatePtr s;
  std::string source;
  if (!a.state.empty()) {
    sqz_state* raw = nullptr;
    check(sqz_state_from_json(read_file(a.state).c_str(), &raw));
    s.reset(raw);
    source = "state " + a.state;
  } else {
    s = gibbs(a.model, a.temperature);
    source = "Gibbs state " + describe(a.model) + " T=" + num(a.temperature);
  }
  sqz_facets f{};
  check(sqz_inequalities(s.get(), &f));
  sqz_ssi_result r{};
  check(sqz_ssi(s.get(), &r));

  Output out(a.output);
  write_header(*out, common, {"inequality set in the X eigenframe, " + source, "separable states have every value >= 0"});
  *out << "facet,value\n";
  *out << "total_variance," << num(f.total_variance) << '\n';
  for (int i = 0; i < 3; ++i) *out << "pair_" << i << ',' << num(f.pair[i]) << '\n';
  for (int i = 0; i < 3; ++i) *out << "single_" << i << ',' << num(f.single[i]) << '\n';
  *out << "casimir," << num(f.casimir) << '\n';
  *out << "# xi=" << num(r.xi) << " K=" << r.k << " B=" << num(r.normalization) << " lower_bound=" << num(r.lower_bound)
       << " best_facet_K=" << r.facet_k << '\n';
  return kOk;
}

// ---- selftest ----------------------------------------------------------

struct SelftestArgs {
  double tighten = 1.0;
  std::string schur_cache;
  std::string write_cache;
  int cache_n = 4;
  bool json = false;
};

int run_selftest(const SelftestArgs& a) {
  if (!a.write_cache.empty()) {
    check(sqz_schur_cache_write(a.cache_n, a.write_cache.c_str()));
    std::cout << "wrote Schur basis N=" << a.cache_n << " to " << a.write_cache << '\n';
    return kOk;
  }
  char* raw = nullptr;
  int passed = 0;
  check(sqz_selftest(a.tighten, a.schur_cache.empty() ? nullptr : a.schur_cache.c_str(), &raw, &passed));
  const std::string text = take_string(raw);
  if (a.json) {
    std::cout << text << '\n';
  } else {
    const auto j = nlohmann::json::parse(text);
    for (const auto& c : j.at("checks")) {
      const double measured = c.at("measured").is_number() ? c.at("measured").get<double>() : INFINITY;
      std::cout << (c.at("passed").get<bool>() ? "PASS " : "FAIL ") << c.at("name").get<std::string>()
                << " measured=" << num(measured) << " tol=" << num(c.at("tolerance").get<double>());
      if (c.at("marginal").get<bool>()) std::cout << " MARGINAL(x" << num(a.tighten) << ")";
      const auto detail = c.at("detail").get<std::string>();
      if (!detail.empty()) std::cout << " [" << detail << "]";
      std::cout << '\n';
    }
  }
  return passed ? kOk : kSelftest;
}

// ---- reproduce ---------------------------------------------------------

struct ReproduceArgs {
  std::string figure;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int upper_points = -1;  // -1: figure default
};

void write_script(const fs::path& path, const std::string& body) {
  std::ofstream f(path);
  if (!f) throw Failure{kUsage, "cannot write " + path.string()};
  f << "# squeezent v" << sqz_version() << " gnuplot script\n"
    << "set datafile separator ','\nset key autotitle columnhead\nset xlabel 'T'\nset ylabel 'BSA'\n"
    << "set yrange [-0.02:1.02]\n"
    << body;
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw Failure{kUsage, "cannot write " + path.string()};
  return f;
}

void lower_series(std::ostream& out, const std::vector<Model>& models, const std::vector<double>& temps, int jobs) {
  out << "N,T,lower_bound\n";
  for (const auto& m : models)
    for (const auto& r : sweep(m, temps, jobs))
      out << m.n << ',' << num(r.temperature) << ',' << num(r.lower_bound) << '\n';
}

std::vector<double> pick(const std::vector<double>& all, int count) {
  if (count < 0 || count >= static_cast<int>(all.size())) return all;
  std::vector<double> out;
  for (int i = 0; i < count; ++i)
    out.push_back(all[static_cast<std::size_t>(count == 1 ? 0 : i * (static_cast<int>(all.size()) - 1) / (count - 1))]);
  return out;
}

void reproduce_fig3(const ReproduceArgs& a, const Common& common) {
  const fs::path dir(a.out_dir);
  const auto temps = grid(0.02, 1.5, 75, false);
  std::vector<Model> models;
  for (int n = 2; n <= 8; ++n) models.push_back(Model{1.0, 1.0, 0.0, n});
  {
    auto f = open_csv(dir / "fig3_lower.csv");
    write_header(f, common, {"XXX g=gz=1 h=0 lower bounds, N=2..8, linear T grid [0.02, 1.5] 75 points"});
    lower_series(f, models, temps, common.jobs);
  }
  UpperOptions o;
  {
    auto f = open_csv(dir / "fig3_upper.csv");
    write_header(f, common, {"XXX g=gz=1 h=0 N=3 full-ansatz upper bounds, linear T grid [0.05, 1.2]",
                             "seed " + std::to_string(a.seed)});
    f << "N,T,lower_bound,upper_bound,termination\n";
    const Model m{1.0, 1.0, 0.0, 3};
    for (double t : pick(grid(0.05, 1.2, 20, false), a.upper_points)) {
      const auto target = gibbs(m, t);
      const auto p = upper_point(target.get(), o, a.seed, nullptr);
      f << 3 << ',' << num(t) << ',' << num(p.lower) << ',' << num(p.summary.t_bsa) << ','
        << termination_name(p.summary.termination) << '\n';
    }
  }
  write_script(dir / "fig3.gp",
               "plot for [n=2:8] 'fig3_lower.csv' using 2:(column(1)==n ? $3 : 1/0) with lines lc rgb 'blue' "
               "title sprintf('lower N=%d', n), \\\n"
               "     'fig3_upper.csv' using 2:4 with points pt 7 lc rgb 'red' title 'upper N=3'\n");
}

void reproduce_fig4(const ReproduceArgs& a, const Common& common, bool ferro) {
  const fs::path dir(a.out_dir);
  const std::string tag = ferro ? "fig4a" : "fig4b";
  // Ferromagnetic: just above the critical field, where the ground state is
  // separable. Anti-ferromagnetic: the supersymmetric point h = -g/N.
  auto model = [&](int n) {
    return ferro ? Model{-1.0, 0.0, 1.05, n} : Model{1.0, 0.0, -1.0 / n, n};
  };
  const std::string note = ferro ? "XX g=-1 gz=0 h=1.05" : "XX g=1 gz=0 h=-g/N";
  const auto temps = grid(0.005, 1.0, 100, false);
  {
    auto f = open_csv(dir / (tag + "_lower.csv"));
    write_header(f, common, {note + " lower bounds N=200 and N=8, linear T grid [0.005, 1.0] 100 points"});
    lower_series(f, {model(200), model(8)}, temps, common.jobs);
  }
  const std::vector<double> upper_temps =
      ferro ? std::vector<double>{0.02, 0.1, 0.2, 0.4} : std::vector<double>{0.05, 0.2, 0.35, 0.5};
  {
    auto f = open_csv(dir / (tag + "_upper.csv"));
    write_header(f, common, {note + " N=8 upper bounds, full and simple ansatz", "seed " + std::to_string(a.seed)});
    f << "N,T,lower_bound,upper_full,upper_simple,termination\n";
    UpperOptions full;
    UpperOptions simple;
    simple.ansatz = "simple";
    for (double t : pick(upper_temps, a.upper_points)) {
      const auto target = gibbs(model(8), t);
      const auto pf = upper_point(target.get(), full, a.seed, nullptr);
      const auto ps = upper_point(target.get(), simple, 0, nullptr);
      f << 8 << ',' << num(t) << ',' << num(pf.lower) << ',' << num(pf.summary.t_bsa) << ','
        << num(ps.summary.t_bsa) << ',' << termination_name(pf.summary.termination) << '\n';
    }
  }
  write_script(dir / (tag + ".gp"),
               "plot '" + tag + "_lower.csv' using 2:(column(1)==200 ? $3 : 1/0) with points pt 6 title 'lower N=200', \\\n"
               "     '" + tag + "_lower.csv' using 2:(column(1)==8 ? $3 : 1/0) with points pt 7 title 'lower N=8', \\\n"
               "     '" + tag + "_upper.csv' using 2:4 with points pt 13 ps 1.5 title 'upper full N=8', \\\n"
               "     '" + tag + "_upper.csv' using 2:5 with points pt 5 title 'upper simple N=8', \\\n"
               "     '" + tag + "_upper.csv' using 2:(0):(0):(1) with vectors nohead dt 2 lc rgb 'gray' notitle\n");
}

void reproduce_thresholds(const ReproduceArgs& a, const Common& common) {
  auto f = open_csv(fs::path(a.out_dir) / "thresholds.csv");
  write_header(f, common, {"largest T with a positive lower bound, bisection to 1e-6",
                           "rows with N=inf are the large-N closed forms"});
  f << "model,g,gz,h,N,T_star,left,right\n";
  auto row = [&](const std::string& name, const Model& m) {
    const auto r = threshold(m, 1e-6);
    f << name << ',' << num(m.g) << ',' << num(m.gz) << ',' << num(m.h) << ',' << m.n << ','
      << (r.found ? num(r.temperature) : std::string("nan")) << ',' << num(r.left) << ',' << num(r.right) << '\n';
  };
  for (int n : {2, 3, 4, 8, 50, 100, 200, 1000}) row("XXX", Model{1.0, 1.0, 0.0, n});
  f << "XXX,1,1,0,inf,1,1,1\n";
  for (int n : {8, 50, 200, 1000}) row("XX", Model{1.0, 0.0, 0.0, n});
  f << "XX,1,0,0,inf,0.5,0.5,0.5\n";
}

int run_reproduce(const ReproduceArgs& a, const Common& common) {
  fs::create_directories(a.out_dir);
  if (a.figure == "fig3")
    reproduce_fig3(a, common);
  else if (a.figure == "fig4a")
    reproduce_fig4(a, common, true);
  else if (a.figure == "fig4b")
    reproduce_fig4(a, common, false);
  else if (a.figure == "thresholds")
    reproduce_thresholds(a, common);
  else
    throw Failure{kUsage, "unknown figure " + a.figure};
  std::cout << "wrote " << a.figure << " data to " << a.out_dir << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounds on the best separable approximation of thermal XXZ states"};
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);
  Common common;
  app.add_option("-j,--jobs", common.jobs, "worker threads for sweeps")->capture_default_str();
  app.add_flag("--no-timestamp", common.no_timestamp, "omit the timestamp header line");
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  LowerArgs lower;
  auto* lo = app.add_subcommand("lower", "SSI lower-bound sweep over temperature (CSV)");
  add_model(lo, lower.model);
  lo->add_option("--tmin", lower.t_min, "smallest temperature")->capture_default_str();
  lo->add_option("--tmax", lower.t_max, "largest temperature")->capture_default_str();
  lo->add_option("--steps", lower.steps, "grid points")->capture_default_str();
  lo->add_option("--scale", lower.scale, "linear or log")->check(CLI::IsMember({"linear", "log"}))->capture_default_str();
  lo->add_flag("--ground", lower.ground, "prepend the T = 0 limit point");
  lo->add_option("--threshold-tol", lower.threshold_tol, "bisection tolerance in T")->capture_default_str();
  lo->add_flag("--no-threshold", lower.no_threshold, "skip the threshold summary line");
  lo->add_option("-o,--output", lower.output, "CSV file (default stdout)");

  UpperArgs upper;
  auto* up = app.add_subcommand("upper", "separable-ensemble upper bound at one temperature");
  add_model(up, upper.model);
  up->add_option("-T,--T", upper.temperature, "temperature")->capture_default_str();
  up->add_option("--ansatz", upper.opts.ansatz, "simple or full")->check(CLI::IsMember({"simple", "full"}))->capture_default_str();
  up->add_option("--seed", upper.opts.seed, "seed for the full ansatz (recorded when omitted)");
  up->add_option("--restarts", upper.opts.restarts, "see-saw restarts per iteration")->capture_default_str();
  up->add_option("--max-outer", upper.opts.max_outer, "outer iterations")->capture_default_str();
  up->add_option("--max-sweeps", upper.opts.max_sweeps, "see-saw sweeps")->capture_default_str();
  up->add_option("--tolerance", upper.opts.tolerance, "convergence tolerance")->capture_default_str();
  up->add_flag("--ball-check", upper.opts.ball_check, "stop when the remainder enters the separable ball");
  up->add_option("--theta-points", upper.opts.theta_points, "theta grid of the simple ansatz")->capture_default_str();
  up->add_option("--warm-start", upper.warm_start, "certificate JSON to start from");
  up->add_option("--certificate", upper.certificate, "write the certificate JSON here");
  up->add_option("-o,--output", upper.output, "CSV file (default stdout)");

  ReproduceArgs repro;
  auto* re = app.add_subcommand("reproduce", "figure and threshold data with gnuplot scripts");
  re->add_option("figure", repro.figure, "fig3, fig4a, fig4b or thresholds")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4a", "fig4b", "thresholds"}));
  re->add_option("--out-dir", repro.out_dir, "output directory")->capture_default_str();
  re->add_option("--seed", repro.seed, "seed for full-ansatz points")->capture_default_str();
  re->add_option("--upper-points", repro.upper_points, "limit the number of upper-bound points");

  InequalityArgs ineq;
  auto* in = app.add_subcommand("inequalities", "dump the facet values of the inequality set");
  add_model(in, ineq.model);
  in->add_option("-T,--T", ineq.temperature, "temperature of the Gibbs state")->capture_default_str();
  in->add_option("--state", ineq.state, "state JSON instead of a Gibbs state");
  in->add_option("-o,--output", ineq.output, "CSV file (default stdout)");

  SelftestArgs st;
  auto* se = app.add_subcommand("selftest", "consistency checks against dense matrices");
  se->add_option("--tighten", st.tighten, "flag checks that fail at tolerance / factor")->capture_default_str();
  se->add_option("--schur-cache", st.schur_cache, "validate this Schur basis cache");
  se->add_option("--write-schur-cache", st.write_cache, "write a Schur basis cache and exit");
  se->add_option("--cache-n", st.cache_n, "particle number for --write-schur-cache")->capture_default_str();
  se->add_flag("--json", st.json, "print the raw JSON report");

  std::string section;
  for (int i = 1; i < argc; ++i)
    for (const auto* sub : {lo, up, re, in, se})
      if (section.empty() && sub->get_name() == argv[i]) section = argv[i];
  app.config_formatter(std::make_shared<KeyValueConfig>(&app, section));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (common.jobs < 1) throw Failure{kUsage, "--jobs must be >= 1"};
    if (*lo) return run_lower(lower, common);
    if (*up) return run_upper(upper, common);
    if (*re) return run_reproduce(repro, common);
    if (*in) return run_inequalities(ineq, common);
    if (*se) return run_selftest(st);
  } catch (const Failure& f) {
    std::cerr << "squeezent: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "squeezent: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
