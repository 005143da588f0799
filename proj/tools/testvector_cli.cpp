#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "run_config.hpp"
#include "testvector/testvector.h"

using json = nlohmann::ordered_json;
using tvcli::Complex;
using tvcli::RunConfig;

namespace {

constexpr const char* kCliVersion = "1.0.0";

enum ExitCode { kOk = 0, kSuiteFailure = 1, kInvalidInput = 2 };

struct CliError {
  std::string code;
  std::string message;
};

void check(tv_status st) {
  if (st != TV_OK) throw CliError{tv_status_name(st), tv_last_error()};
}

struct ParamsDeleter {
  void operator()(tv_params* p) const { tv_params_destroy(p); }
};
struct PhiDeleter {
  void operator()(tv_phi* p) const { tv_phi_destroy(p); }
};
using ParamsPtr = std::unique_ptr<tv_params, ParamsDeleter>;
using PhiPtr = std::unique_ptr<tv_phi, PhiDeleter>;

json take_json(char* s) {
  std::unique_ptr<char, void (*)(char*)> guard(s, tv_string_free);
  return json::parse(s);
}

json complex_json(const double v[2]) { return json::array({v[0], v[1]}); }
json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int default_threads() {
  if (const char* env = std::getenv("TESTVECTOR_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

struct Options {
  std::string mode = "exact";
  std::string suite = "all";
  std::string at = "weyl";
  std::string matrix;
  int count = 4;
  int dim = 0;
  int threads = 1;
};

json config_json(const RunConfig& cfg) {
  json j;
  j["nu"] = cfg.nu;
  j["chi"] = {{"sign", cfg.chi_sign}, {"power", complex_json(cfg.chi_power)}};
  json s = json::array();
  for (const auto& z : cfg.s) s.push_back(complex_json(z));
  j["s"] = s;
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["trials"] = cfg.trials;
  j["quadrature"] = {{"nodes", cfg.quad_nodes},
                     {"t_lo", cfg.quad_t_lo},
                     {"t_hi", cfg.quad_t_hi},
                     {"tolerance", cfg.quad_tolerance},
                     {"scheme", "trapezoid-log"}};
  j["output"] = cfg.output;
  return j;
}

tv_quadrature quad_of(const RunConfig& cfg) {
  return {cfg.quad_nodes, cfg.quad_t_lo, cfg.quad_t_hi, cfg.quad_tolerance};
}

ParamsPtr make_params(const RunConfig& cfg) {
  tv_params* p = nullptr;
  check(tv_params_create(cfg.nu.data(), cfg.nu.size(), cfg.chi_sign, cfg.chi_power.real(),
                         cfg.chi_power.imag(), &p));
  return ParamsPtr(p);
}

PhiPtr make_phi(const tv_params* p) {
  tv_phi* phi = nullptr;
  check(tv_phi_create(p, &phi));
  return PhiPtr(phi);
}

int params_n(const tv_params* p) {
  int n = 0;
  check(tv_params_n(p, &n));
  return n;
}

std::vector<std::vector<int>> sign_patterns(int n) {
  std::vector<std::vector<int>> out;
  for (unsigned bits = 0; bits < (1u << n); ++bits) {
    std::vector<int> eta(n);
    for (int j = 0; j < n; ++j) eta[j] = (bits >> j) & 1u ? -1 : 1;
    out.push_back(eta);
  }
  return out;
}

json matrix_json(const std::vector<double>& m, int dim) {
  json rows = json::array();
  for (int r = 0; r < dim; ++r) {
    rows.push_back(std::vector<double>(m.begin() + r * dim, m.begin() + (r + 1) * dim));
  }
  return rows;
}

json eval_point(const tv_phi* phi, int n, const std::vector<double>& x) {
  double v[2];
  check(tv_phi_eval(phi, x.data(), x.size(), v));
  json section = json::array();
  for (const auto& eta : sign_patterns(n)) {
    double c[2];
    check(tv_section_eval(phi, eta.data(), eta.size(), x.data(), x.size(), c));
    section.push_back({{"eta", eta}, {"value", complex_json(c)}});
  }
  return {{"phi", complex_json(v)}, {"section", section}};
}

json cmd_params(const RunConfig& cfg) {
  auto p = make_params(cfg);
  char* s = nullptr;
  check(tv_params_describe(p.get(), &s));
  return take_json(s);
}

json cmd_construct(const RunConfig& cfg) {
  auto p = make_params(cfg);
  auto phi = make_phi(p.get());
  char* s = nullptr;
  check(tv_phi_describe(phi.get(), &s));
  return {{"phi", take_json(s)}};
}

json cmd_eval(const RunConfig& cfg, const Options& opt) {
  auto p = make_params(cfg);
  auto phi = make_phi(p.get());
  const int n = params_n(p.get());
  const int dim = 2 * n;
  std::vector<double> x(static_cast<std::size_t>(dim * dim));
  json out;
  if (opt.at == "weyl") {
    check(tv_weyl_element(n, x.data(), x.size()));
    const json r = eval_point(phi.get(), n, x);
    out["phi_at_w"] = r["phi"];
    out["section_at_w"] = r["section"];
    return out;
  }
  json points = json::array();
  if (opt.at == "identity") {
    for (int i = 0; i < dim; ++i) x[i * dim + i] = 1.0;
    points.push_back(eval_point(phi.get(), n, x));
  } else if (opt.at == "matrix") {
    const std::vector<double> m = [&] {
      std::vector<double> vals;
      std::string t = opt.matrix;
      for (char& c : t) {
        if (c == ',' || c == ';') c = ' ';
      }
      std::istringstream in(t);
      for (std::string tok; in >> tok;) vals.push_back(tvcli::parse_double(tok));
      return vals;
    }();
    if (m.size() != x.size()) {
      throw CliError{"InvalidArgument", "--matrix needs " + std::to_string(x.size()) + " entries"};
    }
    json r = eval_point(phi.get(), n, m);
    r["matrix"] = matrix_json(m, dim);
    points.push_back(r);
  } else if (opt.at == "sample") {
    for (int i = 0; i < opt.count; ++i) {
      check(tv_sample_O(dim, cfg.seed, static_cast<uint64_t>(i), x.data(), x.size()));
      json r = eval_point(phi.get(), n, x);
      r["index"] = i;
      r["matrix"] = matrix_json(x, dim);
      points.push_back(r);
    }
  } else {
    throw CliError{"InvalidArgument", "--at must be weyl, identity, sample or matrix"};
  }
  out["at"] = opt.at;
  out["points"] = points;
  return out;
}

json cmd_lfactor(const RunConfig& cfg) {
  auto p = make_params(cfg);
  json values = json::array();
  for (const auto& s : cfg.s) {
    char* text = nullptr;
    check(tv_lfactor_json(p.get(), s.real(), s.imag(), &text));
    values.push_back(take_json(text));
  }
  return {{"values", values}};
}

json cmd_integrate(const RunConfig& cfg, const Options& opt) {
  if (opt.mode != "exact" && opt.mode != "mc") {
    throw CliError{"InvalidArgument", "--mode must be exact or mc"};
  }
  if (cfg.s.empty()) throw CliError{"InvalidArgument", "no s values given"};
  auto p = make_params(cfg);
  const tv_quadrature quad = quad_of(cfg);
  Complex c_norm{1.0, 0.0};
  if (opt.mode == "mc") {
    double c[2];
    check(tv_measure_normalization(p.get(), cfg.s.front().real(), cfg.s.front().imag(), &quad, c));
    c_norm = {c[0], c[1]};
  }
  json results = json::array();
  for (const auto& s : cfg.s) {
    double L[2];
    check(tv_lfactor(p.get(), s.real(), s.imag(), L));
    const Complex Lz{L[0], L[1]};
    json r;
    r["s"] = complex_json(s);
    double exact[2];
    check(tv_lambda_exact(p.get(), s.real(), s.imag(), exact));
    if (opt.mode == "exact") {
      r["value"] = complex_json(exact);
      r["stderr"] = 0.0;
      double ratio[2];
      check(tv_normalized_ratio(p.get(), s.real(), s.imag(), ratio));
      r["ratio_to_L"] = complex_json(ratio);
    } else {
      double v[2];
      double se = 0.0;
      check(tv_lambda_montecarlo(p.get(), s.real(), s.imag(), cfg.samples, cfg.seed, opt.threads,
                                 &quad, v, &se));
      const Complex value{v[0], v[1]};
      r["value"] = complex_json(v);
      r["stderr"] = se;
      r["ratio_to_L"] = complex_json(value / (c_norm * Lz));
      r["exact"] = complex_json(exact);
      r["c_norm"] = complex_json(c_norm);
      r["samples"] = cfg.samples;
    }
    r["L"] = complex_json(L);
    results.push_back(r);
  }
  json out;
  out["mode"] = opt.mode;
  if (results.size() == 1) {
    for (auto& [k, v] : results[0].items()) out[k] = v;
  } else {
    out["results"] = results;
  }
  return out;
}

json cmd_sample(const RunConfig& cfg, const Options& opt) {
  auto p = make_params(cfg);
  const int dim = opt.dim > 0 ? opt.dim : 2 * params_n(p.get());
  std::vector<double> x(static_cast<std::size_t>(dim * dim));
  json samples = json::array();
  for (int i = 0; i < opt.count; ++i) {
    check(tv_sample_O(dim, cfg.seed, static_cast<uint64_t>(i), x.data(), x.size()));
    samples.push_back({{"index", i}, {"matrix", matrix_json(x, dim)}});
  }
  return {{"dim", dim}, {"samples", samples}};
}

json cmd_verify(const RunConfig& cfg, const Options& opt, bool& all_pass) {
  auto p = make_params(cfg);
  tv_verify_options vo{};
  vo.trials = cfg.trials;
  vo.threads = opt.threads;
  char* text = nullptr;
  int pass = 0;
  check(tv_verify_json(p.get(), opt.suite.c_str(), cfg.seed, &vo, &text, &pass));
  all_pass = pass != 0;
  return {{"suite", opt.suite}, {"all_pass", all_pass}, {"reports", take_json(text)}};
}

json cmd_report(const RunConfig& cfg, const Options& opt, bool& all_pass) {
  Options exact = opt;
  exact.mode = "exact";
  Options all = opt;
  all.suite = "all";
  json out;
  out["params"] = cmd_params(cfg);
  out["construct"] = cmd_construct(cfg)["phi"];
  out["lfactor"] = cmd_lfactor(cfg)["values"];
  out["integrate"] = cmd_integrate(cfg, exact);
  out["verify"] = cmd_verify(cfg, all, all_pass);
  return out;
}

void emit(const json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw CliError{"InvalidArgument", "cannot write output file '" + path + "'"};
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cohomological test vectors for twisted linear periods of GL(2n, R)"};
  app.set_version_flag("--version", kCliVersion);
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string nu;
  std::string chi_power;
  std::vector<std::string> s_values;
  std::string seed;
  std::string samples;
  std::string trials;
  std::string quad_nodes;
  std::string quad_t_lo;
  std::string quad_t_hi;
  std::string quad_tolerance;
  std::string output;
  std::string chi_sign;
  Options opt;
  opt.threads = default_threads();

  app.add_option("--config", config_path, "key=value configuration file");
  auto* o_nu = app.add_option("--nu", nu, "highest weight, e.g. 2,1,1,0");
  auto* o_chi_sign = app.add_option("--chi-sign", chi_sign, "sign exponent of chi (0 or 1)");
  auto* o_chi_power = app.add_option("--chi-power", chi_power, "power of |.| in chi as re,im");
  auto* o_s = app.add_option("--s", s_values, "evaluation point(s) s as re,im");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_samples = app.add_option("--samples", samples, "Monte-Carlo sample count");
  auto* o_trials = app.add_option("--trials", trials, "trials per equivariance suite");
  auto* o_nodes = app.add_option("--quad-nodes", quad_nodes, "quadrature nodes");
  auto* o_tlo = app.add_option("--quad-t-lo", quad_t_lo, "quadrature lower cutoff in log|a|");
  auto* o_thi = app.add_option("--quad-t-hi", quad_t_hi, "quadrature upper cutoff in log|a|");
  auto* o_tol = app.add_option("--quad-tolerance", quad_tolerance, "step-halving tolerance");
  auto* o_output = app.add_option("--output", output, "write JSON here instead of stdout");
  app.add_option("--threads", opt.threads, "worker threads (default: TESTVECTOR_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  app.add_subcommand("params", "induction datum and characters of nu");
  app.add_subcommand("construct", "factorization of phi and its values at w");
  auto* eval = app.add_subcommand("eval", "evaluate phi and its section");
  eval->add_option("--at", opt.at, "weyl, identity, sample or matrix");
  eval->add_option("--matrix", opt.matrix, "row-major 2n x 2n orthogonal matrix");
  eval->add_option("--count", opt.count, "number of sampled points")->check(CLI::PositiveNumber);
  app.add_subcommand("lfactor", "L(s, pi x chi) at each s");
  auto* integrate = app.add_subcommand("integrate", "the linear functional at each s");
  integrate->add_option("--mode", opt.mode, "exact or mc");
  auto* sample = app.add_subcommand("sample", "Haar samples of O(dim)");
  sample->add_option("--count", opt.count, "number of samples")->check(CLI::PositiveNumber);
  sample->add_option("--dim", opt.dim, "matrix size (default 2n)")->check(CLI::PositiveNumber);
  auto* verify = app.add_subcommand("verify", "property suites");
  verify->add_option("--suite", opt.suite, "all, torus, component, right, hw, rank, iwasawa, haar");
  app.add_subcommand("report", "params, construct, lfactor, exact integrate and all suites");

  json doc;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    doc["error"] = {{"code", "InvalidArgument"}, {"message", e.what()}};
    std::cout << doc.dump(2) << "\n";
    return kInvalidInput;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  doc["command"] = command;
  int code = kOk;
  std::string out_path;
  try {
    RunConfig cfg;
    try {
      if (!config_path.empty()) cfg = RunConfig::load(config_path);
      const std::pair<CLI::Option*, std::pair<const char*, std::string*>> overrides[] = {
          {o_nu, {"nu", &nu}},
          {o_chi_sign, {"chi_sign", &chi_sign}},
          {o_chi_power, {"chi_power", &chi_power}},
          {o_seed, {"seed", &seed}},
          {o_samples, {"samples", &samples}},
          {o_trials, {"trials", &trials}},
          {o_nodes, {"quad_nodes", &quad_nodes}},
          {o_tlo, {"quad_t_lo", &quad_t_lo}},
          {o_thi, {"quad_t_hi", &quad_t_hi}},
          {o_tol, {"quad_tolerance", &quad_tolerance}},
          {o_output, {"output", &output}},
      };
      for (const auto& [option, target] : overrides) {
        if (option->count() > 0) cfg.set(target.first, *target.second);
      }
      if (o_s->count() > 0) {
        std::string joined;
        for (const auto& v : s_values) joined += v + " ";
        cfg.set("s", joined);
      }
    } catch (const std::invalid_argument& e) {
      throw CliError{"InvalidArgument", e.what()};
    }
    out_path = cfg.output;
    doc["config"] = config_json(cfg);
    doc["options"] = {{"mode", opt.mode}, {"suite", opt.suite}, {"at", opt.at},
                      {"count", opt.count}, {"dim", opt.dim}};

    json result;
    bool all_pass = true;
    if (command == "params") {
      result = cmd_params(cfg);
    } else if (command == "construct") {
      result = cmd_construct(cfg);
    } else if (command == "eval") {
      result = cmd_eval(cfg, opt);
    } else if (command == "lfactor") {
      result = cmd_lfactor(cfg);
    } else if (command == "integrate") {
      result = cmd_integrate(cfg, opt);
    } else if (command == "sample") {
      result = cmd_sample(cfg, opt);
    } else if (command == "verify") {
      result = cmd_verify(cfg, opt, all_pass);
    } else {
      result = cmd_report(cfg, opt, all_pass);
    }
    for (auto& [k, v] : result.items()) doc[k] = v;
    if (!all_pass) code = kSuiteFailure;
  } catch (const CliError& e) {
    doc["error"] = {{"code", e.code}, {"message", e.message}};
    code = kInvalidInput;
    out_path.clear();
  } catch (const std::exception& e) {
    doc["error"] = {{"code", "Internal"}, {"message", e.what()}};
    code = kInvalidInput;
    out_path.clear();
  }
  doc["meta"] = {{"version", tv_version()},
                 {"cli_version", kCliVersion},
                 {"threads", opt.threads},
                 {"timestamp", utc_timestamp()}};
  try {
    emit(doc, out_path);
  } catch (const CliError& e) {
    std::cerr << e.message << "\n";
    return kInvalidInput;
  }
  return code;
}
