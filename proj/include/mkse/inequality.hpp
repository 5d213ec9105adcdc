#pragma once

// Randomized verification of the functional inequalities behind the MKSE
// estimates: seminorm interpolation (ladder), sharp sup-norm embeddings in
// 1D and 2D, the improved Ladyzhenskaya inequality, the ||Du||_∞ estimate
// and the Agmon-type mean/fluctuation bound. Every check reports both sides
// so that slack can be tracked, and minimize_slack searches for
// near-extremizers.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mkse/spectral.hpp"

namespace mkse::inequality {

/// Relative tolerance for declaring a violation.
inline constexpr double kTolerance = 1e-12;

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string field_descriptor;

  double slack() const { return rhs - lhs; }
  /// slack / max(|lhs|, |rhs|), zero when both sides vanish.
  double relative_slack() const;
  /// rhs / lhs, +inf when lhs = 0.
  double ratio() const;
  bool passes(double tol = kTolerance) const;
};

class InequalityViolation : public std::runtime_error {
 public:
  explicit InequalityViolation(InequalityCheck check);
  const InequalityCheck& check() const { return check_; }

 private:
  InequalityCheck check_;
};

/// Random real trigonometric polynomial supported on 0 < |k| <= N/4 (plus a
/// random mean unless `zero_mean`), so quartic products stay alias-free
/// after padding by 2. Deterministic in `seed`.
SpectralField random_trig_polynomial(const Grid& grid, std::uint64_t seed, bool zero_mean = true);

/// J_p <= J_{p+r}^{q/(r+q)} J_{p-q}^{r/(r+q)} for the fluctuation of phi.
/// Requires p >= q > 0 and r >= 0.
InequalityCheck check_ladder(const SpectralField& phi, double p, double q, double r);

/// ||phi||_∞ <= (ζ(1+ε)/π)^{1/2} ||(-Δ)^{(1+ε)/4} phi||_2 + L^{-1/2} J_0^{1/2}.
InequalityCheck check_sup_embedding_1d(const SpectralField& phi, double eps, int refine = 4);
/// First right-hand term of the 1D embedding, via the ζ series.
double sup_embedding_1d_derivative_term(const SpectralField& phi, double eps);

/// ||phi||_∞ <= [4ζ(1+ε)β(1+ε)]^{1/2} L^{-1} (L/2π)^{1+ε} ||(-Δ)^{(1+ε)/2} phi||_2
/// for zero-mean 2D phi.
InequalityCheck check_sup_embedding_2d(const SpectralField& phi, double eps, int refine = 4);
/// [4ζ(1+ε)β(1+ε)]^{1/2} L^{-1} (L/2π)^{1+ε}.
double sup_embedding_2d_coefficient(double eps, double L);

/// ∫phi^4 <= (6/π) ∫phi^2 ∫|∇phi|^2 for zero-mean 2D phi.
InequalityCheck check_ladyzhenskaya_improved(const SpectralField& phi);

/// sup |Du| <= π^{-1/2} J_3^{1/4} J_1^{1/4} for zero-mean 2D phi, J_1 > 0.
InequalityCheck check_du_sup(const SpectralField& phi, int refine = 4);

/// Right-hand side L^{-d/2} J_0^{1/2} + c(n) (J_0')^{(2n-d)/4n} J_n^{d/4n}
/// with (d, n, c) = (1, 1, 1) or (2, 2, 1/√π).
double agmon_rhs(int d, int n, double L, double J0, double J0_prime, double Jn);
InequalityCheck check_agmon_general(const SpectralField& phi, int n, int refine = 4);

/// Names accepted by minimize_slack and run by run_suite.
std::vector<std::string> registered_checks();

/// Evaluates a registered check on the suite's random field for `seed`.
InequalityCheck evaluate_registered(const std::string& name, std::uint64_t seed);

/// Random-restart perturbation search over low-mode coefficient vectors for
/// the smallest rhs/lhs. The first restart starts from a single mode.
/// Throws InequalityViolation if a ratio below 1 - 1e-9 is found and
/// std::invalid_argument for unknown names or budget < 1.
InequalityCheck minimize_slack(const std::string& check_name, long budget, std::uint64_t seed);

struct CheckSummary {
  std::string name;
  long fields = 0;
  long violations = 0;
  double min_relative_slack = 0.0;
  double min_ratio = 0.0;
  std::uint64_t worst_seed = 0;
  std::optional<std::uint64_t> first_violation_seed;
};

/// Every registered check on seeds 0..seeds-1, spread over `workers`
/// threads. The result does not depend on the worker count.
std::vector<CheckSummary> run_suite(long seeds, int workers = 1);

}  // namespace mkse::inequality
