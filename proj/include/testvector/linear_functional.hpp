#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "testvector/lfactors.hpp"
#include "testvector/matrix_core.hpp"
#include "testvector/spectral_params.hpp"
#include "testvector/testvector.hpp"

namespace testvector {

/// chi_{1,s} = |.|^{1/2-s} chi^{-1} and chi_{2,s} = |.|^{s-1/2} omega chi.
struct TwistPair {
  RealCharacter chi1;
  RealCharacter chi2;
};
TwistPair twist_pair(const RealCharacter& chi, const RealCharacter& omega, Complex s);

/// Trapezoid rule in t = log|a| on each half-line of R^x, with d^x a = da/|a|.
///
/// `nodes` fixes the step (t_hi - t_lo) / nodes. The lower end is pushed
/// further left when the integrand decays slowly at a -> 0 (small Re of the
/// Mellin exponent); the step is kept. The result is taken at half the step
/// and must agree with the full-step value to `tolerance` (relative).
struct QuadratureSpec {
  int nodes = 4000;
  double t_lo = -30.0;
  double t_hi = 10.0;
  double tolerance = 1e-10;
  std::string scheme = "trapezoid-log";
};

enum class WeightSign { Plus, Minus };

/// Whittaker function of the weight +-(k+1) vector of D_k on diag(a, 1), with
/// psi(x) = e^{2 pi i x}: a^{(k+1)/2} e^{-2 pi a} for a > 0 (Plus), zero for
/// a < 0; Minus is the mirror image under diag(-1, 1).
double whittaker_minimal(long k, double a, WeightSign sign);

enum class HeckeCombo { Plus, Minus, Popa };

struct QuadratureResult {
  Complex value;
  double error_estimate;  // |T(h/2) - T(h)|
  std::size_t nodes;      // evaluations at the finest level
};

/// Integral over R^x of W(diag(a,1)) |a|^{s-1/2} chi(a) |a|^{m/2} d^x a for
/// v_k (Plus), v_{-k} (Minus) or v_k + chi(-1) v_{-k} (Popa).
QuadratureResult hecke_integral_detailed(long k, long m, const RealCharacter& chi, Complex s,
                                         HeckeCombo combo, const QuadratureSpec& quad = {});
Complex hecke_integral(long k, long m, const RealCharacter& chi, Complex s, HeckeCombo combo,
                       const QuadratureSpec& quad = {});

/// lambda_j(v_j) and lambda_j(v_{-j}) for j = 1..n.
struct PairingWeights {
  std::vector<Complex> plus;
  std::vector<Complex> minus;
};

/// Closed form of the Hecke integrals for the Whittaker normalization above:
/// lambda_j(v_j) = L_j / 2 and lambda_j(v_{-j}) = chi(-1) L_j / 2.
PairingWeights exact_weights(const InducedParams& params, const RealCharacter& chi, Complex s);
PairingWeights quadrature_weights(const InducedParams& params, const RealCharacter& chi,
                                  Complex s, const QuadratureSpec& quad = {});

/// <(x)_j lambda_j, f(g)> = sum_eta f_eta(g) prod_j lambda_j(v_{eta_j}).
Complex pair_with_section(const TestVectorSection& sec, const KPoint& g,
                          const PairingWeights& weights);

/// Lambda_{s,chi}(f) through the reduction to the value f(w). Verifies the
/// coefficient pattern f_eta(w) = prod_j chi(sgn eta_j) first.
Complex lambda_exact(const InducedParams& params, const RealCharacter& chi, Complex s);
Complex lambda_exact(const TestVectorSection& sec, const InducedParams& params,
                     const RealCharacter& chi, Complex s);

struct MonteCarloResult {
  Complex value;
  double std_error = 0.0;
  std::size_t samples = 0;
};

struct MonteCarloOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  QuadratureSpec quad;
};

/// Probability-Haar average over K cap H of
///   sum_eta f_eta(w diag(k1,k2)) lambda-weights * xi(k1,k2)^{-1},
/// xi = chi_0(det k1) (chi_0 omega_0)(det k2), lambda-weights by quadrature.
MonteCarloResult lambda_montecarlo(const InducedParams& params, const RealCharacter& chi,
                                   Complex s, const MonteCarloOptions& opts);

/// Average of phi(w h) * sgn(det k1)^{sign1} sgn(det k2)^{sign2} over h in
/// O(n) x O(n). With the signs of xi this collapses to phi(w).
MonteCarloResult average_phi_over_KH(const ScalarKFunction& phi, int sign1, int sign2,
                                     const MonteCarloOptions& opts);

/// prod_j hecke(Popa at s0) / L_j(s0): the normalization constant tying the
/// quadrature pairing to lambda_exact.
Complex measure_normalization(const InducedParams& params, const RealCharacter& chi, Complex s0,
                              const QuadratureSpec& quad = {});

/// lambda_exact / L(s, pi x chi).
Complex normalized_ratio(const InducedParams& params, const RealCharacter& chi, Complex s);

/// Pairwise (cascade) summation.
Complex pairwise_sum(std::span<const Complex> values);

}  // namespace testvector
