#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "testvector/matrix_core.hpp"
#include "testvector/rng.hpp"
#include "testvector/spectral_params.hpp"
#include "testvector/testvector.hpp"

namespace testvector {

/// Cartan generators h_j (the rotation generator [[0,1],[-1,0]] in block j)
/// and the raising vectors of so(2n, C) relative to them, with
/// [h_j, X_alpha] = -i alpha_j X_alpha.
struct RootVectorBasis {
  int n = 0;
  std::vector<RealMatrix> cartan;
  std::vector<ComplexMatrix> raising;
  /// Root of each raising vector as a coefficient vector in eps_1..eps_n.
  std::vector<std::vector<int>> roots;
};

/// Throws ConstructionBug if any stored vector fails the bracket relation at 1e-12.
RootVectorBasis build_root_vectors(int n);

struct SuiteReport {
  std::string suite;
  std::size_t trials = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
  std::string note;
  std::vector<std::pair<std::string, double>> metrics;
};

std::string to_json(const SuiteReport& r);
std::string to_json(const std::vector<SuiteReport>& reports);

/// Deviation of phi(k(theta) x) from exp(i sum N_j theta_j) phi(x).
SuiteReport run_torus_suite(const ScalarKFunction& phi, const std::vector<long>& N,
                            std::size_t trials, std::uint64_t seed, double tol = 1e-9);
/// Deviation of f_eta(k(theta) x) from exp(i sum eta_j N_j theta_j) f_eta(x).
SuiteReport run_component_suite(const TestVectorSection& sec, const std::vector<long>& N,
                                std::size_t trials, std::uint64_t seed, double tol = 1e-9);
/// Deviation of phi(x diag(k1, k2)) from chi0(det k1) (chi0 omega0)(det k2) phi(x).
SuiteReport run_right_suite(const ScalarKFunction& phi, int chi0_sign, int omega0_sign,
                            std::size_t trials, std::uint64_t seed, double tol = 1e-9);

/// Central finite differences along exp(tX) x. Raising directions must give
/// D_A phi + i D_B phi = 0 and torus directions i N_j phi, both within
/// max(1e-6, 10 h^2) relative to the sup of |phi| on the sample points.
/// Reports the observed order of the torus error under h -> h/2.
SuiteReport check_highest_weight(const ScalarKFunction& phi, const RootVectorBasis& basis,
                                 std::size_t trials, double h, std::uint64_t seed);

/// Dimension of the irreducible O(2n)-representation with highest weight mu
/// (mu_n > 0).
long weyl_dimension(const std::vector<long>& mu);

struct RankEstimate {
  long rank = 0;
  double gap = 0.0;  // sigma_rank / sigma_{rank+1}
  std::vector<double> singular_values;
};

/// Numerical rank of [phi(x_p k_q)] over random x_p and k_q, cut at
/// 1e-8 sigma_max. Throws IllConditioned if the gap at the cut is below 1e2.
RankEstimate estimate_ktype_rank(const ScalarKFunction& phi, int samples_right, int points,
                                 Rng& rng);
long estimate_ktype_dimension(const ScalarKFunction& phi, int samples_right, int points, Rng& rng);

/// Sandwich, reconstruction and prod t_i = 1 on random x of every shape
/// (m1, m2) in {1,2,3}^2.
SuiteReport run_iwasawa_suite(std::size_t samples, std::uint64_t seed, double tol = 1e-10);

/// Orthogonality residual, det balance and a two-sample KS test of
/// k_00 against (g0 k)_00 for Haar samples of O(dim).
SuiteReport run_haar_suite(int dim, std::size_t samples, std::uint64_t seed);

/// Kolmogorov-Smirnov two-sample statistic and asymptotic p-value.
std::pair<double, double> ks_two_sample(std::vector<double> a, std::vector<double> b);

struct VerifyOptions {
  std::size_t trials = 1000;
  std::size_t hw_trials = 20;
  double hw_step = 2e-5;
  std::size_t iwasawa_samples = 10000;
  std::size_t haar_samples = 100000;
  /// The rank suite is skipped when weyl_dimension(N) exceeds this.
  long max_rank_dimension = 400;
  int threads = 1;
};

/// Suite names accepted by run_suites: torus, component, right, hw, rank,
/// iwasawa, haar, and "all".
std::vector<std::string> suite_names();

/// Runs the requested suites; suite i draws from stream i of the seed so the
/// result does not depend on the thread count.
std::vector<SuiteReport> run_suites(const InducedParams& params, const RealCharacter& chi,
                                    std::uint64_t seed, const std::string& suite,
                                    const VerifyOptions& opts = {});
std::vector<SuiteReport> run_all(const InducedParams& params, const RealCharacter& chi,
                                 std::uint64_t seed, const VerifyOptions& opts = {});

}  // namespace testvector
