#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "testvector/error.hpp"
#include "testvector/lfactors.hpp"
#include "testvector/linear_functional.hpp"
#include "testvector/matrix_core.hpp"
#include "testvector/rng.hpp"
#include "testvector/spectral_params.hpp"
#include "testvector/testvector.hpp"
#include "testvector/verifier.hpp"

using namespace testvector;

namespace {

constexpr double kWeylTol = 1e-12;
constexpr double kEquivarianceTol = 1e-9;
constexpr std::size_t kEquivarianceTrials = 1000;
constexpr double kHighestWeightTol = 1e-6;
constexpr double kOrderStep = 1e-3;
constexpr double kOrderTol = 0.1;
constexpr double kPopaSpread = 1e-5;
constexpr double kRatioTol = 1e-10;
constexpr std::size_t kRatioPoints = 20;
constexpr std::size_t kMonteCarloSamples = 100000;
constexpr double kMonteCarloSigmas = 3.0;
constexpr double kMonteCarloRoundingFloor = 1e-12;
constexpr std::size_t kIwasawaSamples = 10000;
constexpr double kIwasawaTol = 1e-10;
constexpr std::size_t kHaarSamples = 100000;

struct Outcome {
  bool pass = true;
  std::string detail;
};

InducedParams params(std::vector<long> nu) { return InducedParams::from_weight(HighestWeight(nu)); }

double metric(const SuiteReport& r, const std::string& key) {
  for (const auto& [k, v] : r.metrics) {
    if (k == key) return v;
  }
  return std::nan("");
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

long o4_branching(long a, long b) { return 2 * (a + b + 1) * (a - b + 1); }

int worker_threads() {
  return static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 8u));
}

Outcome weyl_normalization() {
  const std::vector<std::vector<long>> weights = {
      {0, 0}, {1, 0}, {5, 2},
      {2, 1, 1, 0}, {1, 1, 0, 0}, {3, 1, 0, -2},
      {0, 0, 0, 0, 0, 0}, {3, 2, 1, 1, 0, -1}, {2, 2, 1, 0, -1, -1},
      {0, 0, 0, 0, 0, 0, 0, 0}, {1, 1, 1, 1, 0, 0, 0, 0}, {4, 3, 2, 1, 1, 0, -1, -2}};
  Outcome out;
  double worst = 0.0;
  int cases = 0;
  for (const auto& nu : weights) {
    const InducedParams p = params(nu);
    const KPoint w = weyl_element(p.n);
    for (int chi0 : {0, 1}) {
      const double err = std::abs(build_phi(p, chi0)(w) - 1.0);
      worst = std::max(worst, err);
      if (!(err <= kWeylTol)) out.pass = false;
      ++cases;
    }
  }
  out.detail = std::to_string(cases) + " cases, max |phi(w) - 1| = " + fmt("%.3g", worst);
  return out;
}

Outcome equivariance() {
  const std::vector<std::vector<long>> weights = {{1, 0}, {2, 1, 1, 0}, {3, 2, 1, 1, 0, -1}};
  Outcome out;
  double worst = 0.0;
  std::uint64_t seed = 1000;
  int suites = 0;
  for (const auto& nu : weights) {
    const InducedParams p = params(nu);
    for (int chi0 : {0, 1}) {
      const ScalarKFunction phi = build_phi(p, chi0);
      const TestVectorSection sec = expand_section(phi, chi0);
      const SuiteReport reports[] = {
          run_torus_suite(phi, p.N, kEquivarianceTrials, ++seed, kEquivarianceTol),
          run_component_suite(sec, p.N, kEquivarianceTrials, ++seed, kEquivarianceTol),
          run_right_suite(phi, chi0, p.omega0_sign, kEquivarianceTrials, ++seed, kEquivarianceTol)};
      for (const auto& r : reports) {
        worst = std::max(worst, r.max_deviation);
        if (!r.pass || r.trials != kEquivarianceTrials) out.pass = false;
        ++suites;
      }
    }
  }
  out.detail = std::to_string(suites) + " suites x " + std::to_string(kEquivarianceTrials) +
               " trials, max relative deviation = " + fmt("%.3g", worst);
  return out;
}

Outcome highest_weight() {
  const std::vector<std::vector<long>> weights = {{2, 1, 1, 0}, {3, 1, 0, -2}, {3, 2, 1, 1, 0, -1}};
  Outcome out;
  double raising = 0.0;
  double torus = 0.0;
  double worst_order = 0.0;
  const VerifyOptions defaults;
  std::uint64_t seed = 2000;
  for (const auto& nu : weights) {
    const InducedParams p = params(nu);
    const RootVectorBasis basis = build_root_vectors(p.n);
    for (int chi0 : {0, 1}) {
      const ScalarKFunction phi = build_phi(p, chi0);
      const SuiteReport r = check_highest_weight(phi, basis, defaults.hw_trials, defaults.hw_step, ++seed);
      const double rr = metric(r, "raising_residual");
      const double tr = metric(r, "torus_residual");
      raising = std::max(raising, rr);
      torus = std::max(torus, tr);
      if (!(rr <= kHighestWeightTol) || !(tr <= kHighestWeightTol)) out.pass = false;

      const SuiteReport coarse = check_highest_weight(phi, basis, defaults.hw_trials, kOrderStep, ++seed);
      const double order = metric(coarse, "torus_order");
      worst_order = std::max(worst_order, std::abs(order - 2.0));
      if (!(std::abs(order - 2.0) <= kOrderTol)) out.pass = false;
    }
  }
  out.detail = "raising residual " + fmt("%.3g", raising) + ", torus residual " + fmt("%.3g", torus) +
               ", max |order - 2| = " + fmt("%.3g", worst_order);
  return out;
}

Outcome ktype_dimension() {
  Outcome out;
  Rng rng(3000);
  struct Case {
    std::vector<long> nu;
    long expected;
  };
  std::string ranks;
  for (const Case& c : {Case{{0, 0}, 2}, Case{{2, 1, 1, 0}, 90}}) {
    const InducedParams p = params(c.nu);
    const long dim = weyl_dimension(p.N);
    const int count = static_cast<int>(2 * dim + 8);
    const RankEstimate est = estimate_ktype_rank(build_phi(p, 0), count, count, rng);
    if (dim != c.expected || est.rank != c.expected) out.pass = false;
    ranks += std::to_string(est.rank) + " (gap " + fmt("%.2g", est.gap) + ") ";
  }
  int agree = 0;
  int tested = 0;
  for (long a = 1; a <= 16; ++a) {
    for (long b = 1; b <= a; ++b) {
      ++tested;
      if (weyl_dimension({a, b}) == o4_branching(a, b)) ++agree;
    }
  }
  if (agree != tested) out.pass = false;
  out.detail = "ranks " + ranks + "expected 2 and 90, SU(2)xSU(2) oracle agrees on " +
               std::to_string(agree) + "/" + std::to_string(tested) + " weights";
  return out;
}

Outcome popa_identity() {
  Outcome out;
  const std::vector<Complex> points = {{0.3, 0.0}, {0.7, 0.0}, {1.1, 0.5}, {1.9, -1.0}, {2.5, 2.0}};
  double worst = 0.0;
  for (long k : {1L, 2L, 5L}) {
    for (long m : {0L, 3L}) {
      for (const RealCharacter& chi : {RealCharacter::trivial(), RealCharacter(1, {0.2, 0.1})}) {
        std::vector<Complex> ratios;
        for (const Complex& s : points) {
          const Complex z = s + chi.power + static_cast<double>(m) / 2.0 + static_cast<double>(k) / 2.0;
          ratios.push_back(hecke_integral(k, m, chi, s, HeckeCombo::Popa) / gamma_C(z));
        }
        for (const Complex& r : ratios) {
          worst = std::max(worst, std::abs(r - ratios.front()) / std::abs(ratios.front()));
        }
      }
    }
  }
  if (!(worst <= kPopaSpread)) out.pass = false;
  out.detail = "k in {1,2,5}, 5 points each, max relative spread = " + fmt("%.3g", worst);
  return out;
}

Outcome main_identity() {
  Outcome out;
  Rng rng(4000);
  double worst_ratio = 0.0;
  for (const auto& nu : {std::vector<long>{0, 0}, std::vector<long>{2, 1, 1, 0}}) {
    const InducedParams p = params(nu);
    for (int sign : {0, 1}) {
      const RealCharacter chi(sign, {0.0, 0.0});
      for (std::size_t i = 0; i < kRatioPoints; ++i) {
        const Complex s(0.05 + 2.0 * rng.uniform(), -4.0 + 8.0 * rng.uniform());
        const double dev = std::abs(normalized_ratio(p, chi, s) - 1.0);
        worst_ratio = std::max(worst_ratio, dev);
        if (!(dev <= kRatioTol)) out.pass = false;
      }
    }
  }
  double worst_sigma = 0.0;
  double worst_floor_share = 0.0;
  double worst_stderr = 0.0;
  int within_sigmas_alone = 0;
  int mc_cases = 0;
  for (const auto& nu : {std::vector<long>{0, 0}, std::vector<long>{2, 1, 1, 0}}) {
    const InducedParams p = params(nu);
    for (int sign : {0, 1}) {
      const RealCharacter chi(sign, {0.0, 0.0});
      const Complex s(0.7, 0.3);
      MonteCarloOptions opts;
      opts.samples = kMonteCarloSamples;
      opts.seed = 4100 + static_cast<std::uint64_t>(sign);
      opts.threads = worker_threads();
      const MonteCarloResult mc = lambda_montecarlo(p, chi, s, opts);
      const Complex target = lambda_exact(p, chi, s) * measure_normalization(p, chi, s);
      const double diff = std::abs(mc.value - target);
      const double allowed =
          kMonteCarloSigmas * mc.std_error + kMonteCarloRoundingFloor * std::abs(target);
      ++mc_cases;
      if (diff <= kMonteCarloSigmas * mc.std_error) ++within_sigmas_alone;
      worst_stderr = std::max(worst_stderr, mc.std_error / std::abs(target));
      worst_sigma = std::max(worst_sigma, diff / std::abs(target));
      worst_floor_share = std::max(worst_floor_share, diff / allowed);
      if (mc.samples != kMonteCarloSamples || !(diff <= allowed)) out.pass = false;
    }
  }
  out.detail = "max |ratio - 1| = " + fmt("%.3g", worst_ratio) + "; Monte-Carlo N=1e5 relative diff " +
               fmt("%.3g", worst_sigma) + ", relative stderr " + fmt("%.3g", worst_stderr) +
               ", diff/(3 stderr + 1e-12 |exact|) <= " + fmt("%.3g", worst_floor_share) +
               ", within 3 stderr alone in " + std::to_string(within_sigmas_alone) + "/" +
               std::to_string(mc_cases) + " cases";
  return out;
}

Outcome iwasawa() {
  const SuiteReport r = run_iwasawa_suite(kIwasawaSamples, 5000, kIwasawaTol);
  Outcome out;
  out.pass = r.pass && r.trials == kIwasawaSamples;
  out.detail = std::to_string(r.trials) + " samples, max deviation = " + fmt("%.3g", r.max_deviation);
  return out;
}

Outcome haar() {
  Outcome out;
  std::string detail;
  for (int dim : {2, 3, 4, 6}) {
    const SuiteReport r = run_haar_suite(dim, kHaarSamples, 6000 + static_cast<std::uint64_t>(dim));
    if (!r.pass || r.trials != kHaarSamples) out.pass = false;
    detail += "O(" + std::to_string(dim) + "): residual " + fmt("%.2g", r.max_deviation) + ", z " +
              fmt("%.2f", metric(r, "det_balance_z")) + ", KS p " + fmt("%.3f", metric(r, "ks_p_value")) +
              "; ";
  }
  out.detail = detail.substr(0, detail.size() - 2);
  return out;
}

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Weyl-point normalization", 1.0, weyl_normalization},
      {2, "equivariance suites", 30.0, equivariance},
      {3, "highest-weight certification", 60.0, highest_weight},
      {4, "minimal K-type dimension", 300.0, ktype_dimension},
      {5, "Popa identity up to a constant", 10.0, popa_identity},
      {6, "main identity and Monte-Carlo agreement", 300.0, main_identity},
      {7, "Iwasawa bounds", 10.0, iwasawa},
      {8, "Haar sampler", 60.0, haar},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] criterion %d: %s | %s | %.2f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), o.detail.c_str(), secs, c.time_limit_s);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
