#include "mkse/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "padding.hpp"

namespace mkse {
namespace {

constexpr int kContourPoints = 32;
constexpr double kContourRadius = 1.0;
constexpr double kPadding = 2.0;

// Returns n when x/dt is within 1e-9 (relative) of the integer n, else -1.
long whole_multiple(double x, double dt) {
  const double ratio = x / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) return -1;
  return long(rounded);
}

bool nyquist_any(const Grid& g, std::size_t flat) {
  const auto idx = g.unflatten(flat);
  return g.is_nyquist(idx[0]) || (g.dim() == 2 && g.is_nyquist(idx[1]));
}

}  // namespace

std::string to_string(Nonlinearity mode) {
  switch (mode) {
    case Nonlinearity::full: return "full";
    case Nonlinearity::cubic_only: return "cubic-only";
    case Nonlinearity::none: return "none";
  }
  return "full";
}

Nonlinearity parse_nonlinearity(const std::string& text) {
  if (text == "full") return Nonlinearity::full;
  if (text == "cubic-only") return Nonlinearity::cubic_only;
  if (text == "none") return Nonlinearity::none;
  throw ConfigError("dynamics.nonlinearity",
                    "expected one of full, cubic-only, none; got '" + text + "'");
}

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

BlowUpError::BlowUpError(double time, double max_coeff)
    : std::runtime_error("blow-up: non-finite Fourier coefficient at t = " + std::to_string(time) +
                         " (last finite max |coeff| = " + std::to_string(max_coeff) + ")"),
      time_(time),
      max_coeff_(max_coeff) {}

void SolverConfig::validate() const {
  if (!std::isfinite(lambda)) throw ConfigError("dynamics.lambda", "must be finite");
  if (!(dt > 0.0)) throw ConfigError("dynamics.dt", "must be > 0");
  if (!(dt < sample_every))
    throw ConfigError("dynamics.dt", "must be smaller than dynamics.sample_every");
  if (!(sample_every <= transient))
    throw ConfigError("dynamics.transient", "must be >= dynamics.sample_every");
  if (!(transient < t_end)) throw ConfigError("dynamics.t_end", "must be > dynamics.transient");
  if (!std::isfinite(t_end)) throw ConfigError("dynamics.t_end", "must be finite");
  if (whole_multiple(sample_every, dt) < 0)
    throw ConfigError("dynamics.sample_every", "must be a whole multiple of dynamics.dt");
  if (whole_multiple(t_end, dt) < 0)
    throw ConfigError("dynamics.t_end", "must be a whole multiple of dynamics.dt");
  if (!(amplitude > 0.0)) throw ConfigError("init.amplitude", "must be > 0");
  if (!(decay > 1.0)) throw ConfigError("init.decay", "must be > 1");
}

long SolverConfig::total_steps() const { return whole_multiple(t_end, dt); }
long SolverConfig::steps_per_sample() const { return whole_multiple(sample_every, dt); }

std::vector<double> linear_symbol(const Grid& grid, double lambda) {
  const double unit_sq = grid.wavenumber_unit() * grid.wavenumber_unit();
  std::vector<double> sigma(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rho = unit_sq * grid.mode_norm_sq(i);
    sigma[i] = lambda - rho * rho + rho;
  }
  return sigma;
}

// ---------------------------------------------------------------- nonlinear term

NonlinearTerm::NonlinearTerm(const Grid& grid, Nonlinearity mode)
    : grid_(grid),
      mode_(mode),
      fine_n_(int(std::ceil(kPadding * grid.n()))),
      advect_(grid.size()),
      coarse_(grid.size()),
      fine_(detail::grid_size(grid.dim(), fine_n_)) {
  const double unit = grid.wavenumber_unit();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    double k = 0.0;
    for (int axis = 0; axis < grid.dim(); ++axis)
      if (!grid.is_nyquist(idx[axis])) k += grid.mode(idx[axis]);
    advect_[i] = Complex(0.0, unit * k);
  }
}

void NonlinearTerm::evaluate(std::span<const Complex> u_hat, std::span<Complex> out) {
  if (mode_ == Nonlinearity::none) {
    std::fill(out.begin(), out.end(), Complex{});
    return;
  }
  // u and w = u_x (+ u_y) are both real, so one inverse transform of
  // û + i ŵ yields u + i w.
  if (mode_ == Nonlinearity::full) {
    for (std::size_t i = 0; i < coarse_.size(); ++i)
      coarse_[i] = u_hat[i] + Complex(0.0, 1.0) * (advect_[i] * u_hat[i]);
  } else {
    std::copy(u_hat.begin(), u_hat.end(), coarse_.begin());
  }
  detail::pad_spectrum(grid_, coarse_, fine_n_, fine_);
  detail::fft_inplace(fine_, grid_.dim(), fine_n_, detail::FftDirection::backward);
  if (mode_ == Nonlinearity::full) {
    for (auto& z : fine_) {
      const double u = z.real();
      const double w = z.imag();
      z = Complex(-u * u * u - u * w, 0.0);
    }
  } else {
    for (auto& z : fine_) {
      const double u = z.real();
      z = Complex(-u * u * u, 0.0);
    }
  }
  detail::fft_inplace(fine_, grid_.dim(), fine_n_, detail::FftDirection::forward);
  const double scale = 1.0 / double(fine_.size());
  detail::truncate_spectrum(grid_, fine_, fine_n_, out);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = nyquist_any(grid_, i) ? Complex{} : out[i] * scale;
  // The transform of a real product is Hermitian only up to round-off. Any
  // anti-Hermitian residue would be invisible to the nonlinearity and grow
  // at rate σ(k) wherever σ(k) > 0, so it is projected out exactly.
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t j = grid_.conjugate_index(i);
    if (j < i) continue;
    if (j == i) {
      out[i] = out[i].real();
    } else {
      const Complex h = 0.5 * (out[i] + std::conj(out[j]));
      out[i] = h;
      out[j] = std::conj(h);
    }
  }
}

SpectralField nonlinear_term(const SpectralField& u_hat, Nonlinearity mode) {
  NonlinearTerm term(u_hat.grid(), mode);
  SpectralField out(u_hat.grid());
  term.evaluate(u_hat.coeffs(), out.coeffs());
  if (!out.all_finite()) throw BlowUpError(0.0, u_hat.max_abs());
  return out;
}

// ---------------------------------------------------------------- ETDRK4

EtdRk4::EtdRk4(const Grid& grid, double lambda, double dt, Nonlinearity mode)
    : grid_(grid), dt_(dt), nonlinear_(grid, mode) {
  if (!(dt > 0.0)) throw PreconditionError("time step must be > 0");
  const auto sigma = linear_symbol(grid, lambda);
  const std::size_t n = grid.size();
  e_.resize(n);
  e2_.resize(n);
  q_.resize(n);
  f1_.resize(n);
  f2_.resize(n);
  f3_.resize(n);

  std::vector<Complex> roots(kContourPoints);
  for (int j = 0; j < kContourPoints; ++j)
    roots[j] = std::polar(kContourRadius, 2.0 * std::numbers::pi * (j + 0.5) / kContourPoints);

  for (std::size_t i = 0; i < n; ++i) {
    const double h = sigma[i] * dt;
    e_[i] = std::exp(h);
    e2_[i] = std::exp(0.5 * h);
    Complex q{}, f1{}, f2{}, f3{};
    for (const Complex& r : roots) {
      const Complex z = h + r;
      const Complex ez = std::exp(z);
      const Complex z3 = z * z * z;
      q += (std::exp(0.5 * z) - 1.0) / z;
      f1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
      f2 += (2.0 + z + ez * (z - 2.0)) / z3;
      f3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
    }
    q_[i] = dt * q.real() / kContourPoints;
    f1_[i] = dt * f1.real() / kContourPoints;
    f2_[i] = dt * f2.real() / kContourPoints;
    f3_[i] = dt * f3.real() / kContourPoints;
  }
  for (auto* v : {&nv_, &na_, &nb_, &nc_, &a_, &b_, &c_}) v->resize(n);
}

void EtdRk4::advance(SpectralField& u_hat) {
  auto v = u_hat.coeffs();
  const std::size_t n = v.size();
  if (nonlinear_.mode() == Nonlinearity::none) {
    for (std::size_t i = 0; i < n; ++i) v[i] *= e_[i];
    return;
  }
  nonlinear_.evaluate(v, nv_);
  for (std::size_t i = 0; i < n; ++i) a_[i] = e2_[i] * v[i] + q_[i] * nv_[i];
  nonlinear_.evaluate(a_, na_);
  for (std::size_t i = 0; i < n; ++i) b_[i] = e2_[i] * v[i] + q_[i] * na_[i];
  nonlinear_.evaluate(b_, nb_);
  for (std::size_t i = 0; i < n; ++i) c_[i] = e2_[i] * a_[i] + q_[i] * (2.0 * nb_[i] - nv_[i]);
  nonlinear_.evaluate(c_, nc_);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = e_[i] * v[i] + f1_[i] * nv_[i] + 2.0 * f2_[i] * (na_[i] + nb_[i]) + f3_[i] * nc_[i];
}

TrajectoryState step(const TrajectoryState& state, const SolverConfig& cfg) {
  if (!state.u_hat.all_finite()) throw BlowUpError(state.t, state.u_hat.max_abs());
  EtdRk4 stepper(state.u_hat.grid(), cfg.lambda, cfg.dt, cfg.nonlinearity);
  TrajectoryState next{state.t + cfg.dt, state.u_hat};
  stepper.advance(next.u_hat);
  if (!next.u_hat.all_finite()) throw BlowUpError(next.t, state.u_hat.max_abs());
  return next;
}

TrajectoryState integrate(const SolverConfig& cfg, const Observer& observer) {
  cfg.validate();
  TrajectoryState state{0.0, random_field(cfg.grid, cfg.seed, cfg.amplitude, cfg.decay)};
  EtdRk4 stepper(cfg.grid, cfg.lambda, cfg.dt, cfg.nonlinearity);
  const long steps = cfg.total_steps();
  const long stride = cfg.steps_per_sample();
  if (observer) observer(0.0, state.u_hat);
  for (long n = 1; n <= steps; ++n) {
    const double before = state.u_hat.max_abs();
    stepper.advance(state.u_hat);
    state.t = double(n) * cfg.dt;
    if (!state.u_hat.all_finite()) throw BlowUpError(state.t, before);
    if (observer && n % stride == 0) observer(state.t, state.u_hat);
  }
  return state;
}

}  // namespace mkse
