#ifndef BOHMLAB_FFT_HPP
#define BOHMLAB_FFT_HPP

#include <complex>
#include <vector>

#include "bohmlab/grid.hpp"

namespace bohmlab {

using cplx = std::complex<double>;

// In-place radix-2 DFT, forward convention X_k = sum_j x_j e^{-2pi i jk/n}.
// Length must be a power of two.
void fft(std::vector<cplx>& data);

// Inverse transform including the 1/n factor.
void ifft(std::vector<cplx>& data);

// Angular wavenumbers in DFT layout: k_j = 2*pi*j/L for j < n/2,
// 2*pi*(j-n)/L for j >= n/2.
std::vector<double> wavenumbers(const SpatialGrid& grid);

// Spectral first derivative of a periodic complex field.
std::vector<cplx> spectral_derivative(const std::vector<cplx>& values,
                                      const SpatialGrid& grid);

// Spectral first/second derivatives of a periodic real field.
std::vector<double> spectral_derivative_real(const std::vector<double>& values,
                                             const SpatialGrid& grid);
std::vector<double> spectral_second_derivative_real(const std::vector<double>& values,
                                                    const SpatialGrid& grid);

// Fourth-order centered finite difference (second-order one-sided at the
// edges).  Appropriate for fields that are not grid-periodic, like the
// unwrapped action.
std::vector<double> fd4_derivative_real(const std::vector<double>& values,
                                        const SpatialGrid& grid);

}  // namespace bohmlab

#endif
