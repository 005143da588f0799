#include "testvector/linear_functional.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <thread>

#include "testvector/error.hpp"

namespace testvector {

namespace {

constexpr std::size_t kChunk = 1024;
constexpr std::size_t kMaxNodes = 20'000'000;

double log_whittaker_minimal(long k, double t) {
  // log of |a|^{(k+1)/2} e^{-2 pi |a|} at |a| = e^t
  return 0.5 * static_cast<double>(k + 1) * t - 2.0 * std::numbers::pi * std::exp(t);
}

struct HalfLine {
  Complex value;
  double error;
  std::size_t nodes;
};

// Trapezoid sums T(h) and T(h/2) of g(t) on [lo, hi].
HalfLine trapezoid_pair(const std::function<Complex(double)>& g, double lo, double hi,
                        std::size_t intervals, double tolerance) {
  const double h = (hi - lo) / static_cast<double>(intervals);
  std::vector<Complex> coarse(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) coarse[i] = g(lo + h * static_cast<double>(i));
  coarse.front() *= 0.5;
  coarse.back() *= 0.5;
  const Complex t_h = h * pairwise_sum(coarse);
  std::vector<Complex> mid(intervals);
  for (std::size_t i = 0; i < intervals; ++i) mid[i] = g(lo + h * (static_cast<double>(i) + 0.5));
  const Complex t_h2 = 0.5 * t_h + 0.5 * h * pairwise_sum(mid);
  const double err = std::abs(t_h2 - t_h);
  if (!std::isfinite(err) || err > tolerance * std::abs(t_h2) + 1e-300) {
    fail(ErrorCode::QuadratureNonConvergence,
         "trapezoid rule did not converge under step halving (difference " + std::to_string(err) +
             ")");
  }
  return {t_h2, err, 2 * intervals + 1};
}

MonteCarloResult summarize(const std::vector<Complex>& values) {
  MonteCarloResult out;
  out.samples = values.size();
  if (values.empty()) return out;
  const double count = static_cast<double>(values.size());
  out.value = pairwise_sum(values) / count;
  if (values.size() > 1) {
    std::vector<Complex> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = std::norm(values[i] - out.value);
    const double var = pairwise_sum(sq).real() / (count - 1.0);
    out.std_error = std::sqrt(var / count);
  }
  return out;
}

// Samples are grouped in fixed chunks, chunk c drawing from stream c of the
// seed, so the result does not depend on the thread count.
std::vector<Complex> sample_KH(int n, const MonteCarloOptions& opts,
                               const std::function<Complex(const KHPoint&)>& integrand) {
  if (opts.samples < 1) fail(ErrorCode::InvalidArgument, "need at least one sample");
  std::vector<Complex> values(opts.samples);
  const std::size_t chunks = (opts.samples + kChunk - 1) / kChunk;
  const Rng root(opts.seed);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      Rng rng = root.split(c);
      const std::size_t end = std::min(opts.samples, (c + 1) * kChunk);
      for (std::size_t i = c * kChunk; i < end; ++i) values[i] = integrand(haar_sample_KH(n, rng));
    }
  };
  const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(chunks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return values;
}

int xi_sign(const KHPoint& h, int chi0, int omega0) {
  int v = 1;
  if (chi0 == 1) v *= h.k1.det_sign();
  if ((chi0 + omega0) % 2 == 1) v *= h.k2.det_sign();
  return v;
}

}  // namespace

Complex pairwise_sum(std::span<const Complex> values) {
  if (values.size() <= 8) {
    Complex s{0.0, 0.0};
    for (const auto& v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

TwistPair twist_pair(const RealCharacter& chi, const RealCharacter& omega, Complex s) {
  TwistPair p;
  p.chi1 = RealCharacter(chi.sign_exponent, 0.5 - s - chi.power);
  p.chi2 = RealCharacter((omega.sign_exponent + chi.sign_exponent) % 2,
                         s - 0.5 + omega.power + chi.power);
  return p;
}

double whittaker_minimal(long k, double a, WeightSign sign) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "discrete series index must be >= 1");
  if (a == 0.0) fail(ErrorCode::InvalidArgument, "Whittaker function evaluated at a = 0");
  const double x = sign == WeightSign::Plus ? a : -a;
  if (x < 0.0) return 0.0;
  return std::pow(x, 0.5 * static_cast<double>(k + 1)) * std::exp(-2.0 * std::numbers::pi * x);
}

QuadratureResult hecke_integral_detailed(long k, long m, const RealCharacter& chi, Complex s,
                                         HeckeCombo combo, const QuadratureSpec& quad) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "discrete series index must be >= 1");
  if (quad.nodes < 2 || !(quad.t_hi > quad.t_lo)) {
    fail(ErrorCode::InvalidArgument, "invalid quadrature specification");
  }
  const Complex z = s + chi.power + 0.5 * static_cast<double>(m) + 0.5 * static_cast<double>(k);
  if (!(z.real() > 0.0)) {
    fail(ErrorCode::Divergence, "Hecke integral diverges: Re(s + u + m/2 + k/2) = " +
                                    std::to_string(z.real()) + " <= 0");
  }
  const double step = (quad.t_hi - quad.t_lo) / quad.nodes;
  // The a -> 0 tail behaves like e^{Re(z) t}; go far enough left that it is
  // below double precision relative to the integral.
  const double lo = std::min(quad.t_lo, -40.0 / z.real());
  const double hi = std::max(quad.t_hi, std::log(std::max(1.0, std::abs(z))) + 4.0);
  const auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  if (intervals > kMaxNodes) {
    fail(ErrorCode::QuadratureNonConvergence, "quadrature would need too many nodes");
  }
  const Complex shift = s - 0.5 + 0.5 * static_cast<double>(m);

  // Integral over the half-line sgn(a) = sigma of W(a) |a|^{s-1/2+m/2} chi(a).
  auto half_line = [&](double sigma) {
    const Complex chi_sign = eval_character({chi.sign_exponent, {0.0, 0.0}}, sigma);
    auto g = [&](double t) -> Complex {
      const Complex log_mag = log_whittaker_minimal(k, t) + (shift + chi.power) * t;
      return chi_sign * std::exp(log_mag);
    };
    return trapezoid_pair(g, lo, hi, intervals, quad.tolerance);
  };

  // v_k lives on a > 0 and v_{-k} on a < 0.
  QuadratureResult out{{0.0, 0.0}, 0.0, 0};
  auto add = [&out](const HalfLine& part, Complex weight) {
    out.value += weight * part.value;
    out.error_estimate += std::abs(weight) * part.error;
    out.nodes += part.nodes;
  };
  if (combo == HeckeCombo::Plus || combo == HeckeCombo::Popa) add(half_line(1.0), 1.0);
  if (combo == HeckeCombo::Minus) add(half_line(-1.0), 1.0);
  if (combo == HeckeCombo::Popa) add(half_line(-1.0), static_cast<double>(chi.at_minus_one()));
  return out;
}

Complex hecke_integral(long k, long m, const RealCharacter& chi, Complex s, HeckeCombo combo,
                       const QuadratureSpec& quad) {
  return hecke_integral_detailed(k, m, chi, s, combo, quad).value;
}

PairingWeights exact_weights(const InducedParams& params, const RealCharacter& chi, Complex s) {
  PairingWeights w;
  for (long lj : params.l) {
    const Complex L = l_factor_sigma(lj, params.m, chi, s).value;
    w.plus.push_back(0.5 * L);
    w.minus.push_back(0.5 * static_cast<double>(chi.at_minus_one()) * L);
  }
  return w;
}

PairingWeights quadrature_weights(const InducedParams& params, const RealCharacter& chi,
                                  Complex s, const QuadratureSpec& quad) {
  PairingWeights w;
  for (long lj : params.l) {
    w.plus.push_back(hecke_integral(lj, params.m, chi, s, HeckeCombo::Plus, quad));
    w.minus.push_back(hecke_integral(lj, params.m, chi, s, HeckeCombo::Minus, quad));
  }
  return w;
}

Complex pair_with_section(const TestVectorSection& sec, const KPoint& g,
                          const PairingWeights& weights) {
  const int n = sec.n();
  if (static_cast<int>(weights.plus.size()) != n || static_cast<int>(weights.minus.size()) != n) {
    fail(ErrorCode::InvalidArgument, "pairing weights do not match n");
  }
  std::vector<Complex> terms;
  for (const auto& eta : all_sign_patterns(n)) {
    Complex term = sec.component(eta, g);
    for (int j = 0; j < n; ++j) term *= eta[j] == 1 ? weights.plus[j] : weights.minus[j];
    terms.push_back(term);
  }
  return pairwise_sum(terms);
}

Complex lambda_exact(const TestVectorSection& sec, const InducedParams& params,
                     const RealCharacter& chi, Complex s) {
  if (sec.n() != params.n) fail(ErrorCode::InvalidArgument, "section does not match params");
  const auto coeffs = section_at_w(sec);
  const Complex lead = coeffs.at(SignPattern(params.n, 1));
  const int chi_minus = chi.at_minus_one();
  for (const auto& [eta, value] : coeffs) {
    int expected = 1;
    for (int e : eta) expected *= e == -1 ? chi_minus : 1;
    if (std::abs(value - static_cast<double>(expected) * lead) > 1e-10 * std::max(1.0, std::abs(lead))) {
      fail(ErrorCode::ConstructionBug, "coefficient-pattern mismatch at w");
    }
  }
  return pair_with_section(sec, weyl_element(params.n), exact_weights(params, chi, s));
}

Complex lambda_exact(const InducedParams& params, const RealCharacter& chi, Complex s) {
  const auto sec = expand_section(build_phi(params, chi.sign_exponent), chi.sign_exponent);
  const auto coeffs = section_at_w(sec);
  if (std::abs(coeffs.at(SignPattern(params.n, 1)) - 1.0) > 1e-10) {
    fail(ErrorCode::ConstructionBug, "phi(w) != 1");
  }
  return lambda_exact(sec, params, chi, s);
}

MonteCarloResult lambda_montecarlo(const InducedParams& params, const RealCharacter& chi,
                                   Complex s, const MonteCarloOptions& opts) {
  const int chi0 = chi.sign_exponent;
  const auto sec = expand_section(build_phi(params, chi0), chi0);
  const auto weights = quadrature_weights(params, chi, s, opts.quad);
  const KPoint w = weyl_element(params.n);
  const int omega0 = params.omega0_sign;
  auto values = sample_KH(params.n, opts, [&](const KHPoint& h) {
    return pair_with_section(sec, w * h.embedded, weights) *
           static_cast<double>(xi_sign(h, chi0, omega0));
  });
  return summarize(values);
}

MonteCarloResult average_phi_over_KH(const ScalarKFunction& phi, int sign1, int sign2,
                                     const MonteCarloOptions& opts) {
  const KPoint w = weyl_element(phi.n());
  auto values = sample_KH(phi.n(), opts, [&](const KHPoint& h) {
    int xi = 1;
    if (sign1 == 1) xi *= h.k1.det_sign();
    if (sign2 == 1) xi *= h.k2.det_sign();
    return phi(w * h.embedded) * static_cast<double>(xi);
  });
  return summarize(values);
}

Complex measure_normalization(const InducedParams& params, const RealCharacter& chi, Complex s0,
                              const QuadratureSpec& quad) {
  Complex c{1.0, 0.0};
  for (long lj : params.l) {
    c *= hecke_integral(lj, params.m, chi, s0, HeckeCombo::Popa, quad) /
         l_factor_sigma(lj, params.m, chi, s0).value;
  }
  return c;
}

Complex normalized_ratio(const InducedParams& params, const RealCharacter& chi, Complex s) {
  const Complex L = l_factor_pi(params, chi, s).value;
  return lambda_exact(params, chi, s) / L;
}

}  // namespace testvector
