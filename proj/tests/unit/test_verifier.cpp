#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "testvector/error.hpp"
#include "testvector/verifier.hpp"

using namespace testvector;

namespace {

InducedParams params(std::vector<long> nu) { return InducedParams::from_weight(HighestWeight(nu)); }

// O(4) via so(4) = su(2) + su(2): the SO(4) module of weight (a, b)
// is V_{(a+b)/2} x V_{(a-b)/2}; O(4) doubles it when b > 0.
long o4_branching(long a, long b) { return 2 * (a + b + 1) * (a - b + 1); }

// O(6) via so(6) = su(4): Dynkin labels of D3 are (a1-a2, a2-a3, a2+a3),
// with the first label on the central node of A3.
long o6_via_su4(long a1, long a2, long a3) {
  const long b1 = a2 - a3;
  const long b2 = a1 - a2;
  const long b3 = a2 + a3;
  const long num = (b1 + 1) * (b2 + 1) * (b3 + 1) * (b1 + b2 + 2) * (b2 + b3 + 2) * (b1 + b2 + b3 + 3);
  return 2 * num / 12;
}

}  // namespace

TEST_CASE("root vector counts") {
  CHECK(build_root_vectors(1).raising.empty());
  CHECK(build_root_vectors(1).cartan.size() == 1);
  CHECK(build_root_vectors(2).raising.size() == 2);
  CHECK(build_root_vectors(2).cartan.size() == 2);
  CHECK(build_root_vectors(3).raising.size() == 6);
  CHECK(build_root_vectors(4).raising.size() == 12);
}

TEST_CASE("raising vectors are complex antisymmetric") {
  const RootVectorBasis b = build_root_vectors(3);
  for (const auto& x : b.raising) {
    CHECK((x + x.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  }
  for (const auto& root : b.roots) {
    int norm = 0;
    for (int c : root) norm += c * c;
    CHECK(norm == 2);
  }
}

TEST_CASE("weyl_dimension agrees with the SU(2) x SU(2) branching oracle") {
  for (long a = 1; a <= 12; ++a) {
    for (long b = 1; b <= a; ++b) {
      CHECK(weyl_dimension({a, b}) == o4_branching(a, b));
    }
  }
  CHECK(weyl_dimension({6, 2}) == 90);
  CHECK(weyl_dimension({4, 2}) == 42);
}

TEST_CASE("weyl_dimension agrees with the SU(4) formula for n = 3") {
  for (long a = 1; a <= 8; ++a) {
    for (long b = 1; b <= a; ++b) {
      for (long c = 1; c <= b; ++c) {
        CHECK(weyl_dimension({a, b, c}) == o6_via_su4(a, b, c));
      }
    }
  }
  CHECK(weyl_dimension({6, 4, 2}) == 8190);
}

TEST_CASE("weyl_dimension edge cases") {
  CHECK(weyl_dimension({2}) == 2);
  CHECK(weyl_dimension({7}) == 2);
  CHECK_THROWS_AS(weyl_dimension({3, 0}), Error);
  CHECK_THROWS_AS(weyl_dimension({1, 3}), Error);
}

TEST_CASE("rank of the K-type") {
  Rng rng(1);
  const auto phi1 = build_phi(params({0, 0}), 0);
  CHECK(phi1.weight() == std::vector<long>{2});
  CHECK(estimate_ktype_dimension(phi1, 8, 8, rng) == 2);

  const auto phi2 = build_phi(params({2, 1, 1, 0}), 0);
  CHECK(estimate_ktype_dimension(phi2, 200, 200, rng) == 90);
  Rng other(99);
  CHECK(estimate_ktype_dimension(phi2, 200, 200, other) == 90);

  const auto constant = ScalarKFunction::from_factors(2, {0, 0}, false, false);
  CHECK(estimate_ktype_dimension(constant, 10, 10, rng) == 1);
}

TEST_CASE("highest-weight check: n = 1 is vacuous on raising directions") {
  const auto phi = build_phi(params({1, 0}), 0);
  const SuiteReport r = check_highest_weight(phi, build_root_vectors(1), 10, 2e-5, 1);
  CHECK(r.pass);
}

TEST_CASE("highest-weight check is second order") {
  const auto phi = build_phi(params({2, 1, 1, 0}), 1);
  const SuiteReport r = check_highest_weight(phi, build_root_vectors(2), 10, 1e-3, 5);
  double order = 0.0;
  for (const auto& [k, v] : r.metrics) {
    if (k == "torus_order") order = v;
  }
  CHECK(order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("F_lt alone is a highest weight vector of weight (1,1)") {
  const auto f = ScalarKFunction::from_factors(2, {0, 0}, true, false);
  CHECK(f.weight() == std::vector<long>{1, 1});
  CHECK(check_highest_weight(f, build_root_vectors(2), 10, 2e-5, 3).pass);
}

TEST_CASE("mutated phi fails the torus suite") {
  const auto p = params({2, 1, 1, 0});
  const auto phi = build_phi(p, 0);
  auto exps = phi.exponents();
  exps[0] += 1;
  const auto corrupted = ScalarKFunction::from_factors(2, exps, phi.use_lt(), phi.use_rt());
  CHECK(run_torus_suite(phi, p.N, 200, 1).pass);
  CHECK_FALSE(run_torus_suite(corrupted, p.N, 200, 1).pass);
}

TEST_CASE("right suite detects a wrong central sign") {
  const auto p = params({2, 1, 1, 0});
  const auto phi = build_phi(p, 1);
  CHECK(run_right_suite(phi, 1, 0, 200, 2).pass);
  CHECK_FALSE(run_right_suite(phi, 0, 0, 200, 2).pass);
}

TEST_CASE("KS two-sample test") {
  Rng rng(6);
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> shifted;
  for (int i = 0; i < 5000; ++i) {
    a.push_back(rng.normal());
    b.push_back(rng.normal());
    shifted.push_back(rng.normal() + 0.2);
  }
  CHECK(ks_two_sample(a, b).second > 1e-3);
  CHECK(ks_two_sample(a, shifted).second < 1e-6);
  CHECK(ks_two_sample(a, a).first == 0.0);
  CHECK(ks_two_sample(a, a).second == 1.0);
}

TEST_CASE("Kolmogorov tail at reference points") {
  // D chosen so that lambda = 1 and lambda = 1.36 for equal sizes.
  const std::size_t n = 200;
  auto p_at = [&](double lambda) {
    const double ne = std::sqrt(n / 2.0);
    const double d = lambda / (ne + 0.12 + 0.11 / ne);
    // Build samples whose empirical CDFs differ by exactly k/n.
    const auto k = static_cast<std::size_t>(std::round(d * n));
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(static_cast<double>(i));
      b.push_back(static_cast<double>(i + k) + 0.5);
    }
    const auto [stat, p] = ks_two_sample(a, b);
    const double lam = (ne + 0.12 + 0.11 / ne) * stat;
    return std::pair{lam, p};
  };
  for (double target : {1.0, 1.36}) {
    const auto [lam, p] = p_at(target);
    // Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2), three terms.
    const double q = 2.0 * (std::exp(-2.0 * lam * lam) - std::exp(-8.0 * lam * lam) +
                            std::exp(-18.0 * lam * lam));
    CHECK(p == doctest::Approx(q).epsilon(1e-6));
  }
}

TEST_CASE("Iwasawa and Haar suites pass") {
  CHECK(run_iwasawa_suite(2000, 1).pass);
  const SuiteReport h = run_haar_suite(4, 20000, 1);
  CHECK(h.pass);
  CHECK(h.max_deviation <= 1e-10);
}

TEST_CASE("run_all passes on the default parameters and is deterministic") {
  const auto p = params({2, 1, 1, 0});
  VerifyOptions opts;
  opts.trials = 200;
  opts.haar_samples = 20000;
  opts.iwasawa_samples = 2000;
  const auto a = run_all(p, RealCharacter::trivial(), 42, opts);
  CHECK(a.size() == suite_names().size());
  for (const auto& r : a) CHECK_MESSAGE(r.pass, r.suite);
  opts.threads = 3;
  const auto b = run_all(p, RealCharacter::trivial(), 42, opts);
  CHECK(to_json(a) == to_json(b));
  CHECK_THROWS_AS(run_suites(p, RealCharacter::trivial(), 1, "nope", opts), Error);
}
