#include "testvector/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "json.hpp"
#include "testvector/error.hpp"

namespace testvector {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

// Fixed stream ids so every suite owns its generator.
enum Stream : std::uint64_t {
  kTorusStream = 101,
  kComponentStream = 102,
  kRightStream = 103,
  kHwStream = 104,
  kRankStream = 105,
  kIwasawaStream = 106,
  kHaarStream = 107,
};

ComplexMatrix column(const ComplexMatrix& m, int c) { return m.col(c); }

std::vector<double> random_angles(int n, Rng& rng) {
  std::vector<double> t(n);
  for (auto& v : t) v = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
  return t;
}

Complex torus_character(const std::vector<long>& N, const std::vector<double>& theta) {
  double phase = 0.0;
  for (std::size_t j = 0; j < N.size(); ++j) phase += static_cast<double>(N[j]) * theta[j];
  return std::polar(1.0, phase);
}

SuiteReport finish(std::string name, std::size_t trials, double dev, double tol,
                   std::uint64_t seed) {
  SuiteReport r;
  r.suite = std::move(name);
  r.trials = trials;
  r.max_deviation = dev;
  r.tolerance = tol;
  r.pass = dev <= tol;
  r.seed = seed;
  return r;
}

// Maximum of |a_i - b_i| / max_i |b_i|.
double scaled_deviation(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double scale = 0.0;
  double worst = 0.0;
  for (const auto& v : b) scale = std::max(scale, std::abs(v));
  if (!(scale > 0.0)) return kInf;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst / scale;
}

__int128 checked_mul(__int128 a, __int128 b) {
  const __int128 limit = static_cast<__int128>(1) << 120;
  const __int128 abs_a = a < 0 ? -a : a;
  const __int128 abs_b = b < 0 ? -b : b;
  if (abs_b != 0 && abs_a > limit / abs_b) {
    fail(ErrorCode::InvalidArgument, "weight too large for weyl_dimension");
  }
  return a * b;
}

}  // namespace

RootVectorBasis build_root_vectors(int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "n must be >= 1");
  RootVectorBasis basis;
  basis.n = n;
  for (int j = 0; j < n; ++j) {
    RealMatrix h = RealMatrix::Zero(2 * n, 2 * n);
    h(2 * j, 2 * j + 1) = 1.0;
    h(2 * j + 1, 2 * j) = -1.0;
    basis.cartan.push_back(std::move(h));
  }
  const IsotropicFrame frame = isotropic_frame(n);
  const ComplexMatrix& u = frame.u_vectors;
  const ComplexMatrix ubar = u.conjugate();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (b < a) {
        // eps_b - eps_a
        basis.raising.push_back(column(ubar, a) * column(u, b).transpose() -
                                column(u, b) * column(ubar, a).transpose());
        std::vector<int> root(n, 0);
        root[b] = 1;
        root[a] = -1;
        basis.roots.push_back(std::move(root));
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      // eps_a + eps_b
      basis.raising.push_back(column(u, a) * column(u, b).transpose() -
                              column(u, b) * column(u, a).transpose());
      std::vector<int> root(n, 0);
      root[a] = 1;
      root[b] = 1;
      basis.roots.push_back(std::move(root));
    }
  }
  for (std::size_t r = 0; r < basis.raising.size(); ++r) {
    const ComplexMatrix& x = basis.raising[r];
    for (int j = 0; j < n; ++j) {
      const ComplexMatrix h = basis.cartan[j].cast<Complex>();
      const ComplexMatrix diff =
          h * x - x * h + kI * static_cast<double>(basis.roots[r][j]) * x;
      if (diff.cwiseAbs().maxCoeff() > 1e-12) {
        fail(ErrorCode::ConstructionBug, "root vector bracket check failed",
             static_cast<long>(r));
      }
    }
  }
  return basis;
}

std::string to_json(const SuiteReport& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["trials"] = r.trials;
  j["max_deviation"] = r.max_deviation;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["seed"] = r.seed;
  if (!r.note.empty()) j["note"] = r.note;
  if (!r.metrics.empty()) {
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.metrics) m[k] = v;
    j["metrics"] = m;
  }
  return j.dump();
}

std::string to_json(const std::vector<SuiteReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(nlohmann::ordered_json::parse(to_json(r)));
  return arr.dump();
}

SuiteReport run_torus_suite(const ScalarKFunction& phi, const std::vector<long>& N,
                            std::size_t trials, std::uint64_t seed, double tol) {
  Rng rng(seed, kTorusStream);
  std::vector<Complex> lhs;
  std::vector<Complex> rhs;
  for (std::size_t t = 0; t < trials; ++t) {
    const KPoint x = haar_sample_K(phi.n(), rng);
    const auto theta = random_angles(phi.n(), rng);
    lhs.push_back(phi(torus_element(theta) * x));
    rhs.push_back(torus_character(N, theta) * phi(x));
  }
  return finish("torus", trials, scaled_deviation(lhs, rhs), tol, seed);
}

SuiteReport run_component_suite(const TestVectorSection& sec, const std::vector<long>& N,
                                std::size_t trials, std::uint64_t seed, double tol) {
  Rng rng(seed, kComponentStream);
  const auto patterns = all_sign_patterns(sec.n());
  std::vector<Complex> lhs;
  std::vector<Complex> rhs;
  for (std::size_t t = 0; t < trials; ++t) {
    const SignPattern& eta = patterns[t % patterns.size()];
    const KPoint x = haar_sample_K(sec.n(), rng);
    const auto theta = random_angles(sec.n(), rng);
    std::vector<double> flipped(theta);
    for (int j = 0; j < sec.n(); ++j) flipped[j] *= eta[j];
    lhs.push_back(sec.component(eta, torus_element(theta) * x));
    rhs.push_back(torus_character(N, flipped) * sec.component(eta, x));
  }
  return finish("component", trials, scaled_deviation(lhs, rhs), tol, seed);
}

SuiteReport run_right_suite(const ScalarKFunction& phi, int chi0_sign, int omega0_sign,
                            std::size_t trials, std::uint64_t seed, double tol) {
  Rng rng(seed, kRightStream);
  std::vector<Complex> lhs;
  std::vector<Complex> rhs;
  for (std::size_t t = 0; t < trials; ++t) {
    const KPoint x = haar_sample_K(phi.n(), rng);
    const KHPoint h = haar_sample_KH(phi.n(), rng);
    int xi = 1;
    if (chi0_sign == 1) xi *= h.k1.det_sign();
    if ((chi0_sign + omega0_sign) % 2 == 1) xi *= h.k2.det_sign();
    lhs.push_back(phi(x * h.embedded));
    rhs.push_back(static_cast<double>(xi) * phi(x));
  }
  return finish("right", trials, scaled_deviation(lhs, rhs), tol, seed);
}

SuiteReport check_highest_weight(const ScalarKFunction& phi, const RootVectorBasis& basis,
                                 std::size_t trials, double h, std::uint64_t seed) {
  if (basis.n != phi.n()) fail(ErrorCode::InvalidArgument, "basis does not match phi");
  if (!(h > 0.0)) fail(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  const int n = phi.n();
  const auto N = phi.weight();
  Rng rng(seed, kHwStream);
  std::vector<KPoint> xs;
  double sup = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    xs.push_back(haar_sample_K(n, rng));
    sup = std::max(sup, std::abs(phi(xs.back())));
  }

  auto derivative = [&](const RealMatrix& gen, double step, const RealMatrix& x) {
    const RealMatrix plus = (step * gen).exp();
    const RealMatrix minus = plus.transpose();
    return (phi.evaluate(plus * x) - phi.evaluate(minus * x)) / (2.0 * step);
  };

  // Worst residual over all samples: raising and torus directions at step s.
  auto residuals = [&](double step) {
    double raise = 0.0;
    double torus = 0.0;
    for (const auto& kx : xs) {
      const RealMatrix& x = kx.matrix();
      for (const auto& X : basis.raising) {
        const Complex d = derivative(X.real(), step, x) + kI * derivative(X.imag(), step, x);
        raise = std::max(raise, std::abs(d));
      }
      const Complex value = phi.evaluate(x);
      for (int j = 0; j < n; ++j) {
        const Complex d = derivative(basis.cartan[j], step, x);
        torus = std::max(torus, std::abs(d - kI * static_cast<double>(N[j]) * value));
      }
    }
    return std::pair{raise / sup, torus / sup};
  };

  SuiteReport r;
  if (!(sup > 0.0)) {
    r = finish("hw", trials, kInf, std::max(1e-6, 10.0 * h * h), seed);
    r.note = "phi vanishes on all samples";
    return r;
  }
  const auto [raise_h, torus_h] = residuals(h);
  const auto [raise_h2, torus_h2] = residuals(0.5 * h);
  r = finish("hw", trials, std::max(raise_h, torus_h), std::max(1e-6, 10.0 * h * h), seed);
  r.metrics = {{"step", h},
               {"raising_residual", raise_h},
               {"raising_residual_half_step", raise_h2},
               {"torus_residual", torus_h},
               {"torus_residual_half_step", torus_h2}};
  if (torus_h > 1e-13 && torus_h2 > 0.0) {
    r.metrics.emplace_back("torus_order", std::log2(torus_h / torus_h2));
  }
  if (raise_h > 1e-10 && raise_h2 > 0.0) {
    r.metrics.emplace_back("raising_order", std::log2(raise_h / raise_h2));
  }
  return r;
}

long weyl_dimension(const std::vector<long>& mu) {
  const long n = static_cast<long>(mu.size());
  if (n < 1) fail(ErrorCode::InvalidArgument, "empty weight");
  for (long i = 0; i + 1 < n; ++i) {
    if (mu[i] < mu[i + 1]) fail(ErrorCode::InvalidArgument, "weight must be decreasing");
  }
  if (mu[n - 1] <= 0) {
    fail(ErrorCode::InvalidArgument, "weyl_dimension is unsupported for mu_n = 0");
  }
  __int128 num = 2;
  __int128 den = 1;
  for (long i = 0; i < n; ++i) {
    for (long j = i + 1; j < n; ++j) {
      const __int128 a = mu[i] + (n - 1 - i);
      const __int128 b = mu[j] + (n - 1 - j);
      const __int128 ri = n - 1 - i;
      const __int128 rj = n - 1 - j;
      num = checked_mul(num, a * a - b * b);
      den = checked_mul(den, ri * ri - rj * rj);
    }
  }
  if (num % den != 0) fail(ErrorCode::ConstructionBug, "weyl_dimension is not an integer");
  return static_cast<long>(num / den);
}

RankEstimate estimate_ktype_rank(const ScalarKFunction& phi, int samples_right, int points,
                                 Rng& rng) {
  if (samples_right < 1 || points < 1) fail(ErrorCode::InvalidArgument, "need positive counts");
  const int n = phi.n();
  std::vector<KPoint> xs;
  std::vector<KPoint> ks;
  for (int p = 0; p < points; ++p) xs.push_back(haar_sample_K(n, rng));
  for (int q = 0; q < samples_right; ++q) ks.push_back(haar_sample_K(n, rng));
  ComplexMatrix m(points, samples_right);
  for (int p = 0; p < points; ++p) {
    for (int q = 0; q < samples_right; ++q) m(p, q) = phi(xs[p] * ks[q]);
  }
  const Eigen::BDCSVD<ComplexMatrix> svd(m);
  const RealVector& sv = svd.singularValues();
  RankEstimate est;
  est.singular_values.assign(sv.data(), sv.data() + sv.size());
  if (sv.size() == 0 || !(sv(0) > 0.0)) {
    est.rank = 0;
    est.gap = kInf;
    return est;
  }
  const double cut = 1e-8 * sv(0);
  while (est.rank < sv.size() && sv(est.rank) > cut) ++est.rank;
  est.gap = est.rank < sv.size() ? sv(est.rank - 1) / std::max(sv(est.rank), 1e-300) : kInf;
  if (est.gap < 1e2) {
    fail(ErrorCode::IllConditioned,
         "spectral gap " + std::to_string(est.gap) + " at the rank cut is below 1e2", est.rank);
  }
  return est;
}

long estimate_ktype_dimension(const ScalarKFunction& phi, int samples_right, int points,
                              Rng& rng) {
  return estimate_ktype_rank(phi, samples_right, points, rng).rank;
}

SuiteReport run_iwasawa_suite(std::size_t samples, std::uint64_t seed, double tol) {
  Rng rng(seed, kIwasawaStream);
  double recon = 0.0;
  double prod = 0.0;
  double orth = 0.0;
  double sandwich = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const int m1 = 1 + static_cast<int>(s % 3);
    const int m2 = 1 + static_cast<int>((s / 3) % 3);
    const double scale = 0.1 + 2.9 * rng.uniform();
    RealMatrix x(m2, m1);
    for (int c = 0; c < m1; ++c) {
      for (int r = 0; r < m2; ++r) x(r, c) = scale * rng.normal();
    }
    const RealMatrix g = lower_unipotent(x);
    const IwasawaFactors f = iwasawa_lower(x);
    const double gnorm = std::max(1.0, g.cwiseAbs().maxCoeff());
    recon = std::max(recon, (f.reconstruct() - g).cwiseAbs().maxCoeff() / gnorm);
    prod = std::max(prod, std::abs(f.t.prod() - 1.0));
    orth = std::max(orth, orthogonality_residual(f.k));
    try {
      const DetA2Bounds b = det_a2_and_bounds(x);
      const double over = std::max(b.lower - b.det_a2, b.det_a2 - b.upper);
      sandwich = std::max(sandwich, std::max(0.0, over) / std::max(1.0, b.upper));
    } catch (const Error&) {
      sandwich = kInf;
    }
  }
  SuiteReport r = finish("iwasawa", samples, std::max({recon, prod, orth, sandwich}), tol, seed);
  r.metrics = {{"reconstruction", recon},
               {"prod_t_minus_one", prod},
               {"k_orthogonality", orth},
               {"sandwich_violation", sandwich}};
  return r;
}

std::pair<double, double> ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) fail(ErrorCode::InvalidArgument, "KS test needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  // Kolmogorov distribution tail Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
  double p = 1.0;
  if (lambda > 0.2) {
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * lambda * lambda);
      sum += (k % 2 == 1 ? term : -term);
      if (term < 1e-17) break;
    }
    p = std::clamp(2.0 * sum, 0.0, 1.0);
  }
  return {d, p};
}

SuiteReport run_haar_suite(int dim, std::size_t samples, std::uint64_t seed) {
  if (samples < 2) fail(ErrorCode::InvalidArgument, "Haar suite needs at least two samples");
  const Rng root(seed, kHaarStream);
  Rng main = root.split(1);
  Rng other = root.split(2);
  Rng fixed = root.split(3);
  const KPoint g0 = haar_sample_O(dim, fixed);
  double residual = 0.0;
  std::size_t negative = 0;
  std::vector<double> entry_k;
  std::vector<double> entry_gk;
  entry_k.reserve(samples);
  entry_gk.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const KPoint k = haar_sample_O(dim, main);
    residual = std::max(residual, orthogonality_residual(k.matrix()));
    if (k.det_sign() < 0) ++negative;
    entry_k.push_back(k.matrix()(0, 0));
    entry_gk.push_back((g0 * haar_sample_O(dim, other)).matrix()(0, 0));
  }
  const double count = static_cast<double>(samples);
  const double fraction = static_cast<double>(negative) / count;
  const double z = std::abs(fraction - 0.5) / (0.5 / std::sqrt(count));
  const auto [d, p] = ks_two_sample(entry_k, entry_gk);
  SuiteReport r = finish("haar", samples, residual, KPoint::kTolerance, seed);
  r.pass = r.pass && z <= 3.0 && p > 1e-3;
  r.metrics = {{"dim", static_cast<double>(dim)},
               {"det_negative_fraction", fraction},
               {"det_balance_z", z},
               {"ks_statistic", d},
               {"ks_p_value", p}};
  return r;
}

std::vector<std::string> suite_names() {
  return {"torus", "component", "right", "hw", "rank", "iwasawa", "haar"};
}

std::vector<SuiteReport> run_suites(const InducedParams& params, const RealCharacter& chi,
                                    std::uint64_t seed, const std::string& suite,
                                    const VerifyOptions& opts) {
  const auto names = suite_names();
  std::vector<std::string> selected;
  if (suite == "all") {
    selected = names;
  } else if (std::find(names.begin(), names.end(), suite) != names.end()) {
    selected = {suite};
  } else {
    fail(ErrorCode::InvalidArgument, "unknown suite '" + suite + "'");
  }
  const int chi0 = chi.sign_exponent;
  const ScalarKFunction phi = build_phi(params, chi0);
  const TestVectorSection sec = expand_section(phi, chi0);

  auto run_one = [&](const std::string& name) -> SuiteReport {
    if (name == "torus") return run_torus_suite(phi, params.N, opts.trials, seed);
    if (name == "component") return run_component_suite(sec, params.N, opts.trials, seed);
    if (name == "right") {
      return run_right_suite(phi, chi0, params.omega0_sign, opts.trials, seed);
    }
    if (name == "hw") {
      return check_highest_weight(phi, build_root_vectors(params.n), opts.hw_trials, opts.hw_step,
                                  seed);
    }
    if (name == "rank") {
      const long expected = weyl_dimension(params.N);
      if (expected > opts.max_rank_dimension) {
        SuiteReport r = finish("rank", 0, 0.0, 0.0, seed);
        r.note = "skipped: dimension " + std::to_string(expected) + " exceeds " +
                 std::to_string(opts.max_rank_dimension);
        r.metrics = {{"expected", static_cast<double>(expected)}};
        return r;
      }
      const int count = static_cast<int>(2 * expected + 8);
      std::vector<long> ranks;
      std::string note;
      const Rng root(seed, kRankStream);
      for (std::uint64_t rep = 0; rep < 2; ++rep) {
        Rng rng = root.split(rep);
        try {
          ranks.push_back(estimate_ktype_dimension(phi, count, count, rng));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::IllConditioned) throw;
          ranks.push_back(-1);
          note = e.what();
        }
      }
      double dev = 0.0;
      for (long r : ranks) dev = std::max(dev, static_cast<double>(std::labs(r - expected)));
      SuiteReport r = finish("rank", 2, dev, 0.0, seed);
      r.note = note;
      r.metrics = {{"expected", static_cast<double>(expected)},
                   {"rank_first", static_cast<double>(ranks[0])},
                   {"rank_second", static_cast<double>(ranks[1])}};
      return r;
    }
    if (name == "iwasawa") return run_iwasawa_suite(opts.iwasawa_samples, seed);
    return run_haar_suite(2 * params.n, opts.haar_samples, seed);
  };

  std::vector<SuiteReport> reports(selected.size());
  if (opts.threads <= 1 || selected.size() == 1) {
    for (std::size_t i = 0; i < selected.size(); ++i) reports[i] = run_one(selected[i]);
  } else {
    std::vector<std::future<SuiteReport>> jobs;
    for (const auto& name : selected) {
      jobs.push_back(std::async(std::launch::async, run_one, name));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) reports[i] = jobs[i].get();
  }
  return reports;
}

std::vector<SuiteReport> run_all(const InducedParams& params, const RealCharacter& chi,
                                 std::uint64_t seed, const VerifyOptions& opts) {
  return run_suites(params, chi, seed, "all", opts);
}

}  // namespace testvector
