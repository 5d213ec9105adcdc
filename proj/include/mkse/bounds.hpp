#pragma once

// Closed-form time-asymptotic bounds for the MKSE as functions of the
// dimension d, the bifurcation parameter λ > 0 and the torus side L > 0.
//
// Overbar quantities (J̄_n, sup) are limsups over t → ∞; the ⟨·⟩ bounds are
// long-time averages; the crest bound is for C̃_f = ⟨L^{d/2}||u||_∞/J_0^{1/2}⟩.

#include <optional>

namespace mkse::bounds {

/// Catalan's constant β(2).
inline constexpr double kCatalan = 0.91596559417721901505;

/// Riemann ζ(s) and Dirichlet β(s) for s > 1, by Euler-type acceleration
/// (Cohen-Rodriguez Villegas-Zagier) of the alternating series.
double riemann_zeta(double s);
double dirichlet_beta(double s);

/// J̄_0 ≤ L^d (λ + 1/4).
double bound_J0(int d, double lambda, double L);

/// 1D: √((24λ+13)/11) L(λ+1/4).
/// 2D: [5/3 + (5/6) 4^{14/5} (6/π)^{3/5}]^{1/3} L²(λ+1/4).
double bound_J1(int d, double lambda, double L);
double j1_prefactor_2d();

/// J̄_2 ≤ J̄_0^{3/2} [108 + 4λ² + 108 (5/√π)^4 J̄_0² + 108 (78/π)^4 J̄_0^4]^{1/2}
/// with J̄_0 = L²(λ+1/4).
double bound_J2_2d(double lambda, double L);

/// 1D: [Lπ/24 (4λ+1) √((24λ+13)/11)]^{1/2} + √(4λ+1)/2.
/// 2D: L√(6K)/(2π³) J̄_2^{1/2} + L^{-1} J̄_0^{1/2}. The coefficient is the
/// one obtained from ζ(2)β(2) = 6K/π²; the series value of ζ(2)β(2) is
/// π²K/6 (see sup_coefficient_2d_sharp).
double bound_sup(int d, double lambda, double L);

/// L√(6K)/(2π³), multiplying J̄_2^{1/2} in bound_sup(2, ...).
double sup_coefficient_2d(double L);
/// (L/2π²)(ζ(2)β(2))^{1/2} with ζ(2)β(2) = π²K/6.
double sup_coefficient_2d_sharp(double L);

struct TimeAverageBounds {
  double J1;
  double J2;
  std::optional<double> J3;  ///< 2D only
};

/// ⟨J_2⟩ ≤ (2λ+1) J̄_0, ⟨J_1⟩ ≤ (2λ+1)^{1/2} J̄_0 and, in 2D,
/// ⟨J_3⟩ ≤ (2λ+1)^{1/2} J̄_0 [λ + (2λ+1)^{1/2}(1 + √(24/π) L(λ+1/4)^{1/2})].
TimeAverageBounds bound_time_avg(int d, double lambda, double L);

/// 2D triple (⟨J_1⟩, ⟨J_2⟩, ⟨J_3⟩).
struct TimeAverageTriple {
  double J1, J2, J3;
};
TimeAverageTriple bound_time_avg_J1_J2_J3_2d(double lambda, double L);

/// C̃_f ≤ 1 + C̄_f with
/// 1D: C̄_f ≤ L^{1/2} ((24λ+13)/11)^{1/8}  (c(1) = 1),
/// 2D: C̄_f ≤ π^{-1/2} L [(2λ+1) + (156/π)⟨J_1⟩ + (10/√π)⟨J_3⟩^{1/4}⟨J_1⟩^{1/4}]^{1/4}.
double bound_crest_avg(int d, double lambda, double L);

struct BoundSet {
  int d;
  double lambda;
  double L;
  double J0;
  double J1;
  std::optional<double> J2;  ///< 2D only
  double sup;
  double crest_avg;
  double J1_time_avg;
  double J2_time_avg;
  std::optional<double> J3_time_avg;  ///< 2D only
};

BoundSet bound_set(int d, double lambda, double L);

}  // namespace mkse::bounds
