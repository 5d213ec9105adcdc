#pragma once

// Moving spectra between a grid with N modes per axis and a finer one with
// M >= N modes per axis. Nyquist coefficients are split evenly between +N/2
// and -N/2 on the way up and summed on the way down, which keeps the
// padded interpolant real and equal to the coarse samples.

#include <complex>
#include <span>
#include <vector>

#include "mkse/spectral.hpp"

namespace mkse::detail {

/// Writes the coarse spectrum into `fine` (size M^d, zeroed first).
void pad_spectrum(const Grid& coarse, std::span<const Complex> src, int fine_n,
                  std::span<Complex> fine);

/// Reads the coarse band out of a fine spectrum.
void truncate_spectrum(const Grid& coarse, std::span<const Complex> fine, int fine_n,
                       std::span<Complex> dst);

/// Real samples of the interpolant on the grid refined by any factor >= 1.
std::vector<double> refined_values(const SpectralField& f, int refine);

inline std::size_t grid_size(int dim, int n) {
  return dim == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n);
}

}  // namespace mkse::detail
