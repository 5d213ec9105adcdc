#pragma once

// Thin cached wrapper over FFTW complex transforms.
//
// Plans are created once per (dim, n, direction) with FFTW_ESTIMATE so that
// results are bit-reproducible from run to run, and executed with the
// new-array interface so they can be shared across threads.

#include <complex>
#include <span>

namespace mkse::detail {

enum class FftDirection { forward, backward };

/// Unnormalized in-place transform of an n^dim array in flat (ix + n*iy)
/// order. forward uses e^{-i...}, backward e^{+i...}.
void fft_inplace(std::span<std::complex<double>> data, int dim, int n,
                 FftDirection direction);

}  // namespace mkse::detail
