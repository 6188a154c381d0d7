#pragma once

// FFTW-backed transforms between collocation samples and band coefficients.
// Plans are created once per (dim, points) under a lock and executed through
// the new-array interface, so concurrent callers only share read-only plans.

#include <span>
#include <vector>

#include "swe/spectral.hpp"

namespace swe {

// Samples (row-major, (2 band)^dim values) to coefficients in FFT order.
// Throws std::invalid_argument on a size mismatch.
std::vector<Complex> forward(std::span<const double> samples, int dim, int band);
std::vector<Complex> forward(std::span<const Complex> samples, int dim, int band);

// Coefficients to complex samples; the imaginary parts measure how far the
// coefficients are from Hermitian symmetry.
std::vector<Complex> inverse_complex(std::span<const Complex> coeffs, int dim, int band);
// Coefficients to real samples (imaginary parts discarded).
std::vector<double> inverse(std::span<const Complex> coeffs, int dim, int band);

// Coefficients of a state from real samples of u and v.
SpectralState state_from_samples(std::span<const double> u, std::span<const double> v, int dim,
                                 int band);

}  // namespace swe
