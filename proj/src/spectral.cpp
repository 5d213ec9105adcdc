#include "mkse/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fft.hpp"
#include "padding.hpp"

namespace mkse {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Fine-grid indices and weights a coarse axis index maps to when padding.
struct AxisTargets {
  int count = 1;
  std::array<int, 2> index{0, 0};
  double weight = 1.0;
};

AxisTargets axis_targets(const Grid& coarse, int index, int fine_n) {
  AxisTargets t;
  const int n = coarse.n();
  if (fine_n == n) {
    t.index[0] = index;
    return t;
  }
  if (coarse.is_nyquist(index)) {
    t.count = 2;
    t.index = {n / 2, fine_n - n / 2};
    t.weight = 0.5;
    return t;
  }
  const int k = coarse.mode(index);
  t.index[0] = k >= 0 ? k : k + fine_n;
  return t;
}

void check_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw PreconditionError("spectral fields live on different grids");
}

}  // namespace

namespace detail {

void pad_spectrum(const Grid& coarse, std::span<const Complex> src, int fine_n,
                  std::span<Complex> fine) {
  std::fill(fine.begin(), fine.end(), Complex{});
  const int n = coarse.n();
  if (coarse.dim() == 1) {
    for (int ix = 0; ix < n; ++ix) {
      const auto tx = axis_targets(coarse, ix, fine_n);
      for (int a = 0; a < tx.count; ++a) fine[tx.index[a]] += tx.weight * src[ix];
    }
    return;
  }
  for (int iy = 0; iy < n; ++iy) {
    const auto ty = axis_targets(coarse, iy, fine_n);
    for (int ix = 0; ix < n; ++ix) {
      const auto tx = axis_targets(coarse, ix, fine_n);
      const Complex c = src[std::size_t(ix) + std::size_t(n) * iy] * (tx.weight * ty.weight);
      for (int b = 0; b < ty.count; ++b)
        for (int a = 0; a < tx.count; ++a)
          fine[std::size_t(tx.index[a]) + std::size_t(fine_n) * ty.index[b]] += c;
    }
  }
}

void truncate_spectrum(const Grid& coarse, std::span<const Complex> fine, int fine_n,
                       std::span<Complex> dst) {
  const int n = coarse.n();
  if (coarse.dim() == 1) {
    for (int ix = 0; ix < n; ++ix) {
      const auto tx = axis_targets(coarse, ix, fine_n);
      Complex sum{};
      for (int a = 0; a < tx.count; ++a) sum += fine[tx.index[a]];
      dst[ix] = sum;
    }
    return;
  }
  for (int iy = 0; iy < n; ++iy) {
    const auto ty = axis_targets(coarse, iy, fine_n);
    for (int ix = 0; ix < n; ++ix) {
      const auto tx = axis_targets(coarse, ix, fine_n);
      Complex sum{};
      for (int b = 0; b < ty.count; ++b)
        for (int a = 0; a < tx.count; ++a)
          sum += fine[std::size_t(tx.index[a]) + std::size_t(fine_n) * ty.index[b]];
      dst[std::size_t(ix) + std::size_t(n) * iy] = sum;
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------- Grid

Grid::Grid(int dim, int points_per_axis, double length)
    : dim_(dim), n_(points_per_axis), length_(length) {
  if (dim != 1 && dim != 2) throw PreconditionError("grid dimension must be 1 or 2");
  if (points_per_axis < 8 || !is_power_of_two(points_per_axis))
    throw PreconditionError("grid resolution must be a power of two >= 8, got " +
                            std::to_string(points_per_axis));
  if (!(length > 0.0) || !std::isfinite(length))
    throw PreconditionError("grid length must be positive and finite");
  size_ = detail::grid_size(dim, points_per_axis);
}

double Grid::wavenumber_unit() const { return 2.0 * std::numbers::pi / length_; }

std::array<int, 2> Grid::unflatten(std::size_t flat) const {
  if (dim_ == 1) return {int(flat), 0};
  return {int(flat % n_), int(flat / n_)};
}

std::size_t Grid::flatten(int ix, int iy) const {
  return std::size_t(ix) + std::size_t(n_) * std::size_t(iy);
}

std::size_t Grid::conjugate_index(std::size_t flat) const {
  const auto [ix, iy] = unflatten(flat);
  return flatten((n_ - ix) % n_, (n_ - iy) % n_);
}

double Grid::mode_norm_sq(std::size_t flat) const {
  const auto [ix, iy] = unflatten(flat);
  const double kx = mode(ix);
  const double ky = mode(iy);
  return kx * kx + ky * ky;
}

// ---------------------------------------------------------------- fields

RealField::RealField(Grid grid) : grid_(grid), samples_(grid.size(), 0.0) {}

RealField::RealField(Grid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
  if (samples_.size() != grid_.size())
    throw PreconditionError("sample count does not match the grid");
}

SpectralField::SpectralField(Grid grid) : grid_(grid), coeffs_(grid.size()) {}

SpectralField::SpectralField(Grid grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size())
    throw PreconditionError("coefficient count does not match the grid");
}

Complex SpectralField::at(int kx, int ky) const {
  return coeffs_[grid_.flatten(grid_.index_of(kx), grid_.dim() == 2 ? grid_.index_of(ky) : 0)];
}

Complex& SpectralField::at(int kx, int ky) {
  return coeffs_[grid_.flatten(grid_.index_of(kx), grid_.dim() == 2 ? grid_.index_of(ky) : 0)];
}

double SpectralField::hermitian_defect() const {
  double defect = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    defect = std::max(defect, std::abs(coeffs_[i] - std::conj(coeffs_[grid_.conjugate_index(i)])));
  return defect;
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool SpectralField::all_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  check_same_grid(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator*(double scale, SpectralField a) { return a *= scale; }

MultiIndex MultiIndex::from_axes(std::span<const int> axes) {
  MultiIndex m;
  for (int axis : axes) {
    if (axis < 0 || axis > 1) throw PreconditionError("derivative axis must be 0 or 1");
    ++m.order[axis];
  }
  return m;
}

// ---------------------------------------------------------------- transforms

SpectralField forward_transform(const RealField& f) {
  const Grid& g = f.grid();
  std::vector<Complex> data(f.samples().begin(), f.samples().end());
  detail::fft_inplace(data, g.dim(), g.n(), detail::FftDirection::forward);
  const double scale = 1.0 / double(g.size());
  for (auto& c : data) c *= scale;
  return SpectralField(g, std::move(data));
}

RealField inverse_transform(const SpectralField& f) {
  const double defect = f.hermitian_defect();
  if (defect > 1e-10 * f.max_abs())
    throw PreconditionError("spectral field is not Hermitian (defect " + std::to_string(defect) +
                            ")");
  const Grid& g = f.grid();
  std::vector<Complex> data(f.coeffs().begin(), f.coeffs().end());
  detail::fft_inplace(data, g.dim(), g.n(), detail::FftDirection::backward);
  std::vector<double> samples(data.size());
  std::transform(data.begin(), data.end(), samples.begin(), [](const Complex& c) { return c.real(); });
  return RealField(g, std::move(samples));
}

// ---------------------------------------------------------------- operators

SpectralField partial_derivative(const SpectralField& f, MultiIndex n) {
  const Grid& g = f.grid();
  if (n.order[0] < 0 || n.order[1] < 0) throw PreconditionError("negative derivative order");
  if (g.dim() == 1 && n.order[1] != 0)
    throw PreconditionError("y-derivative requested on a 1D grid");
  const double unit = g.wavenumber_unit();
  // i^{|n|} cycles through 1, i, -1, -i.
  static constexpr std::array<Complex, 4> kPhase{Complex{1, 0}, Complex{0, 1}, Complex{-1, 0},
                                                 Complex{0, -1}};
  const Complex phase = kPhase[n.total() % 4];

  SpectralField out(g);
  auto dst = out.coeffs();
  auto src = f.coeffs();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    double magnitude = 1.0;
    for (int axis = 0; axis < g.dim(); ++axis) {
      const int order = n.order[axis];
      if (order == 0) continue;
      if (order % 2 == 1 && g.is_nyquist(idx[axis])) {
        magnitude = 0.0;
        break;
      }
      magnitude *= std::pow(unit * g.mode(idx[axis]), order);
    }
    dst[i] = magnitude == 0.0 ? Complex{} : phase * (magnitude * src[i]);
  }
  return out;
}

SpectralField fractional_laplacian(const SpectralField& f, double s) {
  if (!(s >= 0.0)) throw PreconditionError("fractional Laplacian order must be >= 0");
  const Grid& g = f.grid();
  const double unit_sq = g.wavenumber_unit() * g.wavenumber_unit();
  SpectralField out(g);
  auto dst = out.coeffs();
  auto src = f.coeffs();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double rho = unit_sq * g.mode_norm_sq(i);
    dst[i] = std::pow(rho, 0.5 * s) * src[i];
  }
  return out;
}

double sobolev_seminorm(const SpectralField& f, double s) {
  if (!(s >= 0.0)) throw PreconditionError("seminorm order must be >= 0");
  const Grid& g = f.grid();
  auto c = f.coeffs();
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double k2 = g.mode_norm_sq(i);
    if (k2 == 0.0 && s > 0.0) continue;
    sum += std::pow(k2, s) * std::norm(c[i]);
  }
  return std::pow(g.length(), g.dim()) * std::pow(g.wavenumber_unit(), 2.0 * s) * sum;
}

SpectralField dealiased_product(std::span<const SpectralField> factors, double cutoff_factor) {
  if (factors.size() < 2 || factors.size() > 3)
    throw PreconditionError("dealiased_product takes 2 or 3 factors");
  for (const auto& f : factors) check_same_grid(factors.front(), f);
  const double required = (double(factors.size()) + 1.0) / 2.0;
  if (!(cutoff_factor >= required))
    throw PreconditionError("cutoff factor " + std::to_string(cutoff_factor) +
                            " is below the alias-free minimum " + std::to_string(required));

  const Grid& g = factors.front().grid();
  const int fine_n = int(std::ceil(cutoff_factor * g.n()));
  const std::size_t fine_size = detail::grid_size(g.dim(), fine_n);

  std::vector<double> product(fine_size, 1.0);
  std::vector<Complex> fine(fine_size);
  for (const auto& f : factors) {
    detail::pad_spectrum(g, f.coeffs(), fine_n, fine);
    detail::fft_inplace(fine, g.dim(), fine_n, detail::FftDirection::backward);
    for (std::size_t i = 0; i < fine_size; ++i) product[i] *= fine[i].real();
  }
  std::copy(product.begin(), product.end(), fine.begin());
  detail::fft_inplace(fine, g.dim(), fine_n, detail::FftDirection::forward);
  const double scale = 1.0 / double(fine_size);
  for (auto& c : fine) c *= scale;

  SpectralField out(g);
  detail::truncate_spectrum(g, fine, fine_n, out.coeffs());
  return out;
}

std::vector<double> detail::refined_values(const SpectralField& f, int refine) {
  if (refine < 1) throw PreconditionError("refinement factor must be >= 1");
  const Grid& g = f.grid();
  const int fine_n = refine * g.n();
  std::vector<Complex> fine(detail::grid_size(g.dim(), fine_n));
  detail::pad_spectrum(g, f.coeffs(), fine_n, fine);
  detail::fft_inplace(fine, g.dim(), fine_n, detail::FftDirection::backward);
  std::vector<double> samples(fine.size());
  std::transform(fine.begin(), fine.end(), samples.begin(), [](const Complex& c) { return c.real(); });
  return samples;
}

RealField refined_samples(const SpectralField& f, int refine) {
  if (refine < 1 || (refine & (refine - 1)) != 0)
    throw PreconditionError("refinement factor must be a power of two, got " + std::to_string(refine));
  const Grid& g = f.grid();
  return RealField(Grid(g.dim(), refine * g.n(), g.length()), detail::refined_values(f, refine));
}

double sup_norm_estimate(const SpectralField& f, int refine) {
  if (refine < 1) throw PreconditionError("refinement factor must be >= 1");
  double sup = 0.0;
  for (int r = 1; r <= refine; ++r) {
    for (double v : detail::refined_values(f, r)) sup = std::max(sup, std::abs(v));
  }
  return sup;
}

SpectralField random_field(const Grid& grid, std::uint64_t seed, double amplitude, double decay) {
  if (!(amplitude > 0.0)) throw PreconditionError("random_field amplitude must be > 0");
  if (!(decay > 1.0)) throw PreconditionError("random_field decay must be > 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::bernoulli_distribution sign;

  SpectralField out(grid);
  auto c = out.coeffs();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    if (grid.is_nyquist(idx[0]) || (grid.dim() == 2 && grid.is_nyquist(idx[1]))) continue;
    const std::size_t j = grid.conjugate_index(i);
    if (j < i) continue;
    const double magnitude = amplitude * std::pow(1.0 + std::sqrt(grid.mode_norm_sq(i)), -decay);
    if (j == i) {
      c[i] = sign(rng) ? magnitude : -magnitude;
    } else {
      c[i] = std::polar(magnitude, phase(rng));
      c[j] = std::conj(c[i]);
    }
  }
  return out;
}

}  // namespace mkse
