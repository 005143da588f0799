#include "testvector/testvector.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "json.hpp"
#include "testvector/error.hpp"
#include "testvector/lfactors.hpp"
#include "testvector/linear_functional.hpp"
#include "testvector/matrix_core.hpp"
#include "testvector/spectral_params.hpp"
#include "testvector/testvector.hpp"
#include "testvector/verifier.hpp"

using namespace testvector;
using json = nlohmann::ordered_json;

struct tv_params {
  ParamSpec spec;
  InducedParams induced;
};

struct tv_phi {
  ScalarKFunction phi;
  int chi0_sign;
  int omega0_sign;
};

namespace {

thread_local std::string g_last_error;

tv_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return TV_INVALID_ARGUMENT;
    case ErrorCode::PurityViolation: return TV_PURITY_VIOLATION;
    case ErrorCode::ParityViolation: return TV_PARITY_VIOLATION;
    case ErrorCode::PoleAt: return TV_POLE;
    case ErrorCode::Divergence: return TV_DIVERGENCE;
    case ErrorCode::QuadratureNonConvergence: return TV_QUADRATURE_NONCONVERGENCE;
    case ErrorCode::ConstructionBug: return TV_CONSTRUCTION_BUG;
    case ErrorCode::IllConditioned: return TV_ILL_CONDITIONED;
  }
  return TV_INTERNAL;
}

template <class F>
tv_status guard(F&& body) {
  g_last_error.clear();
  try {
    body();
    return TV_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TV_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TV_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void put(const Complex& z, double out[2]) {
  out[0] = z.real();
  out[1] = z.imag();
}

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json character_json(const RealCharacter& c) {
  return {{"sign", c.sign_exponent}, {"power", complex_json(c.power)}};
}

KPoint read_matrix(int n, const double* x, std::size_t len) {
  require(x != nullptr, "null matrix");
  const std::size_t dim = static_cast<std::size_t>(2 * n);
  require(len == dim * dim, "matrix length must be 4 n^2");
  RealMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = x[r * dim + c];
  }
  return KPoint(std::move(m));
}

void write_matrix(const RealMatrix& m, double* out, std::size_t len) {
  require(out != nullptr, "null output buffer");
  require(len == static_cast<std::size_t>(m.size()), "output buffer has the wrong length");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[r * m.cols() + c] = m(r, c);
  }
}

QuadratureSpec quad_from(const tv_quadrature* q) {
  QuadratureSpec spec;
  if (!q) return spec;
  if (q->nodes > 0) spec.nodes = q->nodes;
  if (q->t_lo != 0.0) spec.t_lo = q->t_lo;
  if (q->t_hi != 0.0) spec.t_hi = q->t_hi;
  if (q->tolerance > 0.0) spec.tolerance = q->tolerance;
  return spec;
}

tv_params* make_params(ParamSpec spec) {
  auto* p = new tv_params{std::move(spec), {}};
  try {
    p->induced = InducedParams::from_weight(HighestWeight(p->spec.nu));
  } catch (...) {
    delete p;
    throw;
  }
  return p;
}

}  // namespace

extern "C" {

const char* tv_version(void) { return "1.0.0"; }

const char* tv_last_error(void) { return g_last_error.c_str(); }

const char* tv_status_name(tv_status status) {
  switch (status) {
    case TV_OK: return "Ok";
    case TV_INVALID_ARGUMENT: return "InvalidArgument";
    case TV_PURITY_VIOLATION: return "PurityViolation";
    case TV_PARITY_VIOLATION: return "ParityViolation";
    case TV_POLE: return "PoleAt";
    case TV_DIVERGENCE: return "Divergence";
    case TV_QUADRATURE_NONCONVERGENCE: return "QuadratureNonConvergence";
    case TV_CONSTRUCTION_BUG: return "ConstructionBug";
    case TV_ILL_CONDITIONED: return "IllConditioned";
    case TV_INTERNAL: return "Internal";
  }
  return "Unknown";
}

void tv_string_free(char* s) { std::free(s); }

tv_status tv_params_create(const long* nu, size_t len, int chi_sign, double chi_re, double chi_im,
                           tv_params** out) {
  return guard([&] {
    require(out != nullptr, "null output handle");
    require(nu != nullptr || len == 0, "null weight");
    ParamSpec spec;
    spec.nu.assign(nu, nu + len);
    spec.chi = RealCharacter(chi_sign, {chi_re, chi_im});
    *out = make_params(std::move(spec));
  });
}

tv_status tv_params_from_json(const char* text, tv_params** out) {
  return guard([&] {
    require(out != nullptr && text != nullptr, "null argument");
    *out = make_params(ParamSpec::from_json(text));
  });
}

void tv_params_destroy(tv_params* p) { delete p; }

tv_status tv_params_n(const tv_params* p, int* n) {
  return guard([&] {
    require(p != nullptr && n != nullptr, "null argument");
    *n = p->induced.n;
  });
}

tv_status tv_params_describe(const tv_params* p, char** out) {
  return guard([&] {
    require(p != nullptr && out != nullptr, "null argument");
    const InducedParams& ip = p->induced;
    const CentralCharacters cc = central_characters(ip);
    const int chi0 = p->spec.chi.sign_exponent;
    json j;
    j["nu"] = p->spec.nu;
    j["n"] = ip.n;
    j["m"] = ip.m;
    j["l"] = ip.l;
    j["N"] = ip.N;
    j["omega"] = character_json(cc.omega);
    j["omega_pi"] = character_json(cc.omega_pi);
    j["omega0_sign"] = ip.omega0_sign;
    j["chi"] = character_json(p->spec.chi);
    j["parity_compatible"] = parity_compatible(ip.N, ip.omega0_sign);
    j["phi_case"] = std::string(to_string(phi_case(ip.N, chi0)));
    j["modular_symbol_dimension"] = modular_symbol_dimension(ip.n);
    *out = dup_string(j.dump());
  });
}

tv_status tv_phi_create(const tv_params* p, tv_phi** out) {
  return guard([&] {
    require(p != nullptr && out != nullptr, "null argument");
    const int chi0 = p->spec.chi.sign_exponent;
    *out = new tv_phi{build_phi(p->induced, chi0), chi0, p->induced.omega0_sign};
  });
}

tv_status tv_phi_create_for_weight(const long* N, size_t n, int omega0_sign, int chi0_sign,
                                   tv_phi** out) {
  return guard([&] {
    require(out != nullptr && N != nullptr && n > 0, "null argument");
    const std::vector<long> weight(N, N + n);
    *out = new tv_phi{build_phi_for_weight(weight, omega0_sign, chi0_sign), chi0_sign, omega0_sign};
  });
}

void tv_phi_destroy(tv_phi* phi) { delete phi; }

tv_status tv_phi_n(const tv_phi* phi, int* n) {
  return guard([&] {
    require(phi != nullptr && n != nullptr, "null argument");
    *n = phi->phi.n();
  });
}

tv_status tv_phi_describe(const tv_phi* phi, char** out) {
  return guard([&] {
    require(phi != nullptr && out != nullptr, "null argument");
    const auto& f = phi->phi;
    json j;
    j["n"] = f.n();
    j["weight"] = f.weight();
    j["phi_case"] = std::string(to_string(phi_case(f.weight(), phi->chi0_sign)));
    j["factors"] = f.describe();
    j["exponents"] = f.exponents();
    j["F_lt"] = f.use_lt();
    j["F_rt"] = f.use_rt();
    j["chi0_sign"] = phi->chi0_sign;
    j["omega0_sign"] = phi->omega0_sign;
    j["phi_at_w"] = complex_json(f(weyl_element(f.n())));
    json at_w = json::array();
    for (const auto& [eta, value] : section_at_w(expand_section(f, phi->chi0_sign))) {
      at_w.push_back({{"eta", eta}, {"value", complex_json(value)}});
    }
    j["section_at_w"] = at_w;
    *out = dup_string(j.dump());
  });
}

tv_status tv_phi_eval(const tv_phi* phi, const double* x, size_t len, double out[2]) {
  return guard([&] {
    require(phi != nullptr && out != nullptr, "null argument");
    put(phi->phi(read_matrix(phi->phi.n(), x, len)), out);
  });
}

tv_status tv_section_eval(const tv_phi* phi, const int* eta, size_t n, const double* x,
                          size_t len, double out[2]) {
  return guard([&] {
    require(phi != nullptr && out != nullptr && eta != nullptr, "null argument");
    require(n == static_cast<size_t>(phi->phi.n()), "sign pattern length must equal n");
    const TestVectorSection sec = expand_section(phi->phi, phi->chi0_sign);
    put(sec.component(std::span<const int>(eta, n), read_matrix(phi->phi.n(), x, len)), out);
  });
}

tv_status tv_weyl_element(int n, double* out, size_t len) {
  return guard([&] { write_matrix(weyl_element(n).matrix(), out, len); });
}

tv_status tv_sample_O(int dim, uint64_t seed, uint64_t index, double* out, size_t len) {
  return guard([&] {
    Rng rng = Rng(seed).split(index);
    write_matrix(haar_sample_O(dim, rng).matrix(), out, len);
  });
}

tv_status tv_lfactor_json(const tv_params* p, double s_re, double s_im, char** out) {
  return guard([&] {
    require(p != nullptr && out != nullptr, "null argument");
    const LFactorValue L = l_factor_pi(p->induced, p->spec.chi, {s_re, s_im});
    json j;
    j["s"] = complex_json(L.s);
    j["value"] = complex_json(L.value);
    json args = json::array();
    for (const auto& z : L.gamma_c_args) args.push_back(complex_json(z));
    j["gamma_c_args"] = args;
    j["description"] = L.description();
    *out = dup_string(j.dump());
  });
}

tv_status tv_lfactor(const tv_params* p, double s_re, double s_im, double out[2]) {
  return guard([&] {
    require(p != nullptr && out != nullptr, "null argument");
    put(l_factor_pi(p->induced, p->spec.chi, {s_re, s_im}).value, out);
  });
}

tv_status tv_hecke_integral(long k, long m, int chi_sign, double u_re, double u_im, double s_re,
                            double s_im, tv_hecke_combo combo, const tv_quadrature* quad,
                            double out[2], double* error) {
  return guard([&] {
    require(out != nullptr, "null argument");
    HeckeCombo c;
    switch (combo) {
      case TV_COMBO_PLUS: c = HeckeCombo::Plus; break;
      case TV_COMBO_MINUS: c = HeckeCombo::Minus; break;
      case TV_COMBO_POPA: c = HeckeCombo::Popa; break;
      default: fail(ErrorCode::InvalidArgument, "unknown Hecke combination");
    }
    const QuadratureResult r = hecke_integral_detailed(
        k, m, RealCharacter(chi_sign, {u_re, u_im}), {s_re, s_im}, c, quad_from(quad));
    put(r.value, out);
    if (error) *error = r.error_estimate;
  });
}

tv_status tv_lambda_exact(const tv_params* p, double s_re, double s_im, double out[2]) {
  return guard([&] {
    require(p != nullptr && out != nullptr, "null argument");
    put(lambda_exact(p->induced, p->spec.chi, {s_re, s_im}), out);
  });
}

tv_status tv_lambda_montecarlo(const tv_params* p, double s_re, double s_im, size_t samples,
                               uint64_t seed, int threads, const tv_quadrature* quad,
                               double out[2], double* std_error) {
  return guard([&] {
    require(p != nullptr && out != nullptr, "null argument");
    MonteCarloOptions opts;
    opts.samples = samples;
    opts.seed = seed;
    opts.threads = threads;
    opts.quad = quad_from(quad);
    const MonteCarloResult r = lambda_montecarlo(p->induced, p->spec.chi, {s_re, s_im}, opts);
    put(r.value, out);
    if (std_error) *std_error = r.std_error;
  });
}

tv_status tv_measure_normalization(const tv_params* p, double s_re, double s_im,
                                   const tv_quadrature* quad, double out[2]) {
  return guard([&] {
    require(p != nullptr && out != nullptr, "null argument");
    put(measure_normalization(p->induced, p->spec.chi, {s_re, s_im}, quad_from(quad)), out);
  });
}

tv_status tv_normalized_ratio(const tv_params* p, double s_re, double s_im, double out[2]) {
  return guard([&] {
    require(p != nullptr && out != nullptr, "null argument");
    put(normalized_ratio(p->induced, p->spec.chi, {s_re, s_im}), out);
  });
}

tv_status tv_verify_json(const tv_params* p, const char* suite, uint64_t seed,
                         const tv_verify_options* opts, char** out, int* all_pass) {
  return guard([&] {
    require(p != nullptr && out != nullptr, "null argument");
    VerifyOptions vo;
    if (opts) {
      if (opts->trials > 0) vo.trials = opts->trials;
      if (opts->hw_trials > 0) vo.hw_trials = opts->hw_trials;
      if (opts->hw_step > 0.0) vo.hw_step = opts->hw_step;
      if (opts->iwasawa_samples > 0) vo.iwasawa_samples = opts->iwasawa_samples;
      if (opts->haar_samples > 0) vo.haar_samples = opts->haar_samples;
      if (opts->max_rank_dimension > 0) vo.max_rank_dimension = opts->max_rank_dimension;
      if (opts->threads > 0) vo.threads = opts->threads;
    }
    const auto reports =
        run_suites(p->induced, p->spec.chi, seed, suite ? suite : "all", vo);
    if (all_pass) {
      *all_pass = 1;
      for (const auto& r : reports) {
        if (!r.pass) *all_pass = 0;
      }
    }
    *out = dup_string(to_json(reports));
  });
}

}  // extern "C"
