#pragma once

// Fourier representation of real periodic fields on the d-torus [0,L]^d,
// d = 1 or 2, with spectral differentiation, dealiased products and
// Sobolev seminorms.
//
// Coefficients are stored in FFT order on each axis: index i holds the
// signed integer mode i for i <= N/2 and i - N above it. The flat index is
// ix + N*iy. The Nyquist index N/2 is read as mode +N/2.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace mkse {

using Complex = std::complex<double>;

/// Thrown when an operation's precondition is violated.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform collocation grid on the torus [0,L]^d.
class Grid {
 public:
  Grid(int dim, int points_per_axis, double length);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double length() const { return length_; }
  std::size_t size() const { return size_; }

  /// 2π/L, the physical wavenumber of integer mode 1.
  double wavenumber_unit() const;

  /// Signed integer mode held at FFT index `index` on one axis.
  int mode(int index) const { return index <= n_ / 2 ? index : index - n_; }
  /// FFT index holding signed mode `k` on one axis; |k| <= N/2.
  int index_of(int k) const { return k >= 0 ? k : k + n_; }
  bool is_nyquist(int index) const { return index == n_ / 2; }

  /// Axis indices (ix, iy) of a flat index; iy = 0 in 1D.
  std::array<int, 2> unflatten(std::size_t flat) const;
  std::size_t flatten(int ix, int iy = 0) const;
  /// Flat index of the mode -k for the mode held at `flat`.
  std::size_t conjugate_index(std::size_t flat) const;
  /// |k|^2 for the integer mode vector held at `flat`.
  double mode_norm_sq(std::size_t flat) const;

  bool operator==(const Grid&) const = default;

 private:
  int dim_;
  int n_;
  double length_;
  std::size_t size_;
};

/// Samples of a real field at the collocation points x_j = j L / N.
class RealField {
 public:
  explicit RealField(Grid grid);
  RealField(Grid grid, std::vector<double> samples);

  const Grid& grid() const { return grid_; }
  std::span<const double> samples() const { return samples_; }
  std::span<double> samples() { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }
  double& operator[](std::size_t i) { return samples_[i]; }

 private:
  Grid grid_;
  std::vector<double> samples_;
};

/// Normalized Fourier coefficients: u(x) = Σ_k coeff(k) e^{2πi k·x/L}.
class SpectralField {
 public:
  explicit SpectralField(Grid grid);
  SpectralField(Grid grid, std::vector<Complex> coeffs);

  const Grid& grid() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }

  /// Coefficient of the signed integer mode (kx, ky).
  Complex at(int kx, int ky = 0) const;
  Complex& at(int kx, int ky = 0);

  /// Largest |coeff(k) - conj(coeff(-k))| over all modes.
  double hermitian_defect() const;
  double max_abs() const;
  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator*=(double scale);

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator*(double scale, SpectralField a);

/// Orders of a mixed partial derivative, one entry per axis.
struct MultiIndex {
  std::array<int, 2> order{0, 0};

  /// Builds the multi-index of successive differentiation along `axes`, so
  /// that {0, 1} and {1, 0} give the same operator.
  static MultiIndex from_axes(std::span<const int> axes);
  int total() const { return order[0] + order[1]; }
};

SpectralField forward_transform(const RealField& f);

/// Rejects input whose Hermitian defect exceeds 1e-10 relative to its
/// largest coefficient; the imaginary residue of the samples is dropped.
RealField inverse_transform(const SpectralField& f);

/// Partial derivative D^n: multiplies coeff(k) by Π_j (2πi k_j / L)^{n_j}.
/// Odd orders along an axis zero that axis' Nyquist modes.
SpectralField partial_derivative(const SpectralField& f, MultiIndex n);

/// (-Δ)^{s/2}: multiplies coeff(k) by ((2π/L)^2 |k|^2)^{s/2}, s >= 0.
SpectralField fractional_laplacian(const SpectralField& f, double s);

/// J_s = L^d (2π/L)^{2s} Σ_k |k|^{2s} |coeff(k)|^2. The mean mode only
/// contributes at s = 0.
double sobolev_seminorm(const SpectralField& f, double s);

/// Zero-pads every factor to ceil(cutoff_factor N) modes per axis,
/// multiplies in physical space and truncates back to the original band.
/// Requires 2 or 3 factors on one grid and cutoff_factor >= (m + 1) / 2.
SpectralField dealiased_product(std::span<const SpectralField> factors,
                                double cutoff_factor = 2.0);

/// Samples of the band-limited interpolant of `f` on the grid refined by
/// `refine` per axis (zero-padded inverse transform); refine is a power of two.
RealField refined_samples(const SpectralField& f, int refine);

/// Lower estimate of ||u||_∞: the largest |sample| over the grids refined by
/// 1, 2, ..., refine, which makes it nondecreasing in `refine`.
double sup_norm_estimate(const SpectralField& f, int refine = 4);

/// Hermitian field with |coeff(k)| = amplitude (1 + |k|)^{-decay} and
/// pseudo-random phases drawn from `seed`. Self-conjugate modes get a
/// random sign; Nyquist modes are left at zero.
SpectralField random_field(const Grid& grid, std::uint64_t seed,
                           double amplitude, double decay);

}  // namespace mkse
