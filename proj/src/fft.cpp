#include "bohmlab/fft.hpp"

#include <cmath>
#include <numbers>

namespace bohmlab {

namespace {

// Iterative Cooley-Tukey with a per-call twiddle table. sign=-1 forward.
void transform(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n < 2) return;

    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    std::vector<cplx> roots(n / 2);
    const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t j = 0; j < n / 2; ++j)
        roots[j] = cplx(std::cos(base * static_cast<double>(j)),
                        std::sin(base * static_cast<double>(j)));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx w = roots[j * stride];
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
}

}  // namespace

void fft(std::vector<cplx>& data) {
    transform(data, -1);
}

void ifft(std::vector<cplx>& data) {
    transform(data, +1);
    const double inv = 1.0 / static_cast<double>(data.size());
    for (auto& z : data) z *= inv;
}

std::vector<double> wavenumbers(const SpatialGrid& grid) {
    const std::size_t n = grid.n_points;
    const double dk = 2.0 * std::numbers::pi / grid.length();
    std::vector<double> k(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto sj = static_cast<long>(j);
        const long wrapped = sj < static_cast<long>(n / 2) ? sj : sj - static_cast<long>(n);
        k[j] = dk * static_cast<double>(wrapped);
    }
    return k;
}

std::vector<cplx> spectral_derivative(const std::vector<cplx>& values,
                                      const SpatialGrid& grid) {
    std::vector<cplx> hat = values;
    fft(hat);
    const auto k = wavenumbers(grid);
    for (std::size_t j = 0; j < hat.size(); ++j) hat[j] *= cplx(0.0, k[j]);
    // zero the unpaired Nyquist mode so the derivative of real input stays real
    if (!hat.empty()) hat[hat.size() / 2] = 0.0;
    ifft(hat);
    return hat;
}

std::vector<double> spectral_derivative_real(const std::vector<double>& values,
                                             const SpatialGrid& grid) {
    std::vector<cplx> buf(values.begin(), values.end());
    auto d = spectral_derivative(buf, grid);
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = d[j].real();
    return out;
}

std::vector<double> spectral_second_derivative_real(const std::vector<double>& values,
                                                    const SpatialGrid& grid) {
    std::vector<cplx> hat(values.begin(), values.end());
    fft(hat);
    const auto k = wavenumbers(grid);
    for (std::size_t j = 0; j < hat.size(); ++j) hat[j] *= -k[j] * k[j];
    ifft(hat);
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = hat[j].real();
    return out;
}

std::vector<double> fd4_derivative_real(const std::vector<double>& values,
                                        const SpatialGrid& grid) {
    const std::size_t n = values.size();
    std::vector<double> out(n, 0.0);
    if (n < 5) return out;
    const double inv12 = 1.0 / (12.0 * grid.dq);
    for (std::size_t j = 2; j + 2 < n; ++j) {
        out[j] = (values[j - 2] - 8.0 * values[j - 1] + 8.0 * values[j + 1] - values[j + 2]) *
                 inv12;
    }
    const double inv2 = 1.0 / (2.0 * grid.dq);
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) * inv2;
    out[1] = (values[2] - values[0]) * inv2;
    out[n - 2] = (values[n - 1] - values[n - 3]) * inv2;
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) * inv2;
    return out;
}

}  // namespace bohmlab
