#pragma once

// Time integration of the modified Kuramoto-Sivashinsky equation
//
//   u_t = -Δ²u - Δu + λu - u³ - u(u_x + u_y)      (d = 2)
//   u_t = -u_xxxx - u_xx + λu - u³ - u u_x        (d = 1)
//
// on the periodic torus, by fourth-order exponential time differencing
// (ETDRK4) in Fourier space.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mkse/spectral.hpp"

namespace mkse {

enum class Nonlinearity { full, cubic_only, none };

std::string to_string(Nonlinearity mode);
/// Parses "full", "cubic-only" or "none".
Nonlinearity parse_nonlinearity(const std::string& text);

struct SolverConfig {
  Grid grid{1, 128, 6.283185307179586};
  double lambda = 1.0;
  double dt = 0.005;
  double t_end = 200.0;
  double transient = 100.0;
  double sample_every = 0.1;
  std::uint64_t seed = 0;
  double amplitude = 1.0;
  double decay = 3.0;
  Nonlinearity nonlinearity = Nonlinearity::full;

  /// Enforces 0 < dt < sample_every <= transient < t_end, that
  /// sample_every and t_end are whole multiples of dt, and the initial-data
  /// constraints. Throws ConfigError naming the offending field.
  void validate() const;

  long total_steps() const;
  long steps_per_sample() const;
};

/// Invalid solver or run configuration; `field()` is the dotted field name.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A coefficient became non-finite during integration.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double time, double max_coeff);
  double time() const { return time_; }
  /// Largest |coefficient| of the last finite state.
  double max_coeff() const { return max_coeff_; }

 private:
  double time_;
  double max_coeff_;
};

struct TrajectoryState {
  double t = 0.0;
  SpectralField u_hat;
};

/// σ(k) = λ - ρ² + ρ with ρ = (2π/L)²|k|², one entry per flat mode index.
std::vector<double> linear_symbol(const Grid& grid, double lambda);

/// Dealiased (padding factor 2) transform of -u³ - u·u_x (1D) or
/// -u³ - u(u_x + u_y) (2D). Nyquist modes of the result are zero.
/// Keeps preallocated work arrays, so one instance serves one thread.
class NonlinearTerm {
 public:
  NonlinearTerm(const Grid& grid, Nonlinearity mode);

  void evaluate(std::span<const Complex> u_hat, std::span<Complex> out);
  Nonlinearity mode() const { return mode_; }

 private:
  Grid grid_;
  Nonlinearity mode_;
  int fine_n_;
  std::vector<Complex> advect_;  // i(k_x + k_y) 2π/L, zero at odd-order Nyquist
  std::vector<Complex> coarse_;
  std::vector<Complex> fine_;
};

SpectralField nonlinear_term(const SpectralField& u_hat, Nonlinearity mode);

/// ETDRK4 propagator for a fixed (grid, λ, dt). The φ-function weights are
/// averaged over 32 points of a unit circle around each σ·dt.
class EtdRk4 {
 public:
  EtdRk4(const Grid& grid, double lambda, double dt, Nonlinearity mode);

  /// Advances `u_hat` by one step in place.
  void advance(SpectralField& u_hat);
  double dt() const { return dt_; }

 private:
  Grid grid_;
  double dt_;
  std::vector<double> e_, e2_, q_, f1_, f2_, f3_;
  NonlinearTerm nonlinear_;
  std::vector<Complex> nv_, na_, nb_, nc_, a_, b_, c_;
};

/// One ETDRK4 step of size cfg.dt. Throws BlowUpError on non-finite output.
TrajectoryState step(const TrajectoryState& state, const SolverConfig& cfg);

using Observer = std::function<void(double t, const SpectralField& u_hat)>;

/// Starts from random_field(grid, seed, amplitude, decay), integrates to
/// t_end and calls `observer` at t = 0, sample_every, 2 sample_every, ...
TrajectoryState integrate(const SolverConfig& cfg, const Observer& observer);

}  // namespace mkse
