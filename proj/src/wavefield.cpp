#include "bohmlab/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bohmlab {

double WaveField::norm() const {
    double s = 0.0;
    for (const auto& z : values) s += std::norm(z);
    return std::sqrt(s * grid.dq);
}

std::vector<double> WaveField::density_profile() const {
    std::vector<double> rho(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) rho[j] = std::norm(values[j]);
    return rho;
}

void WaveField::normalize() {
    const double n = norm();
    if (!(n > 0.0)) throw Error("WaveField::normalize: zero-norm field");
    const double inv = 1.0 / n;
    for (auto& z : values) z *= inv;
}

std::size_t PolarField::masked_count() const {
    std::size_t c = 0;
    for (bool b : node_mask) c += b ? 1 : 0;
    return c;
}

double l2_distance(const WaveField& a, const WaveField& b) {
    if (a.grid != b.grid) throw GridMismatch("l2_distance: fields on different grids");
    double s = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j) s += std::norm(a.values[j] - b.values[j]);
    return std::sqrt(s * a.grid.dq);
}

namespace {

// wraps into (-pi, pi]
double wrap_angle(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a <= -std::numbers::pi) a += two_pi;
    if (a > std::numbers::pi) a -= two_pi;
    return a;
}

}  // namespace

PolarField polar_decompose(const WaveField& psi, const PhysicalParams& params,
                           double node_threshold) {
    const std::size_t n = psi.values.size();
    PolarField out;
    out.grid = psi.grid;
    out.time = psi.time;
    out.hbar = params.hbar;
    out.R.resize(n);
    out.S.assign(n, 0.0);
    out.node_mask.assign(n, false);
    out.masked_values.assign(n, cplx(0.0, 0.0));

    double r_max = 0.0;
    std::size_t j_max = 0;
    for (std::size_t j = 0; j < n; ++j) {
        out.R[j] = std::abs(psi.values[j]);
        if (out.R[j] > r_max) {
            r_max = out.R[j];
            j_max = j;
        }
    }

    const double cutoff = node_threshold * r_max;
    std::size_t masked = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (out.R[j] < cutoff) {
            out.node_mask[j] = true;
            out.masked_values[j] = psi.values[j];
            ++masked;
        }
    }
    if (masked == n)
        throw AllPointsMasked("polar_decompose: node_threshold masks every grid point");

    std::vector<double> raw(n);
    for (std::size_t j = 0; j < n; ++j) raw[j] = std::arg(psi.values[j]);

    // Anchor at the density maximum, unwrap outward in both directions.
    // Masked points keep their principal-value phase and do not participate
    // in the continuity chain; after a masked gap the branch nearest to the
    // last unmasked value is taken.
    std::vector<double> unwrapped = raw;
    {
        std::size_t prev = j_max;
        for (std::size_t j = j_max + 1; j < n; ++j) {
            if (out.node_mask[j]) continue;
            unwrapped[j] = unwrapped[prev] + wrap_angle(raw[j] - raw[prev]);
            prev = j;
        }
        prev = j_max;
        for (std::size_t jj = j_max; jj-- > 0;) {
            if (out.node_mask[jj]) continue;
            unwrapped[jj] = unwrapped[prev] + wrap_angle(raw[jj] - raw[prev]);
            prev = jj;
        }
    }

    for (std::size_t j = 0; j < n; ++j) out.S[j] = params.hbar * unwrapped[j];
    return out;
}

std::vector<double> bridged_action(const PolarField& polar) {
    std::vector<double> S = polar.S;
    const std::size_t n = S.size();
    for (std::size_t j = 0; j < n; ++j) {
        if (!polar.node_mask[j]) continue;
        std::size_t lo = j, hi = j;
        while (lo > 0 && polar.node_mask[lo]) --lo;
        while (hi + 1 < n && polar.node_mask[hi]) ++hi;
        const bool has_lo = !polar.node_mask[lo], has_hi = !polar.node_mask[hi];
        if (has_lo && has_hi && hi > lo) {
            const double t = static_cast<double>(j - lo) / static_cast<double>(hi - lo);
            S[j] = (1.0 - t) * polar.S[lo] + t * polar.S[hi];
        } else if (has_lo) {
            S[j] = polar.S[lo];
        } else if (has_hi) {
            S[j] = polar.S[hi];
        }
    }
    return S;
}

std::vector<double> action_gradient(const PolarField& polar) {
    return fd4_derivative_real(bridged_action(polar), polar.grid);
}

std::vector<bool> gradient_resolved_mask(const PolarField& polar, double max_step_rad,
                                         double max_fourth_diff_rad) {
    // the fourth difference over the stencil tracks the truncation error of
    // the local derivative; phase structure the grid cannot resolve shows up
    // there long before the step cap trips
    const std::size_t n = polar.S.size();
    const double step_cap = max_step_rad * polar.hbar;
    const double d4_cap = max_fourth_diff_rad * polar.hbar;
    std::vector<bool> ok(n, false);
    for (std::size_t j = 3; j + 3 < n; ++j) {
        bool good = true;
        for (std::size_t l = j - 3; l <= j + 3 && good; ++l) good = !polar.node_mask[l];
        for (std::size_t l = j - 3; l < j + 3 && good; ++l)
            good = std::abs(polar.S[l + 1] - polar.S[l]) <= step_cap;
        for (std::size_t c = j - 1; c <= j + 1 && good; ++c) {
            const double d4 = polar.S[c - 2] - 4.0 * polar.S[c - 1] + 6.0 * polar.S[c] -
                              4.0 * polar.S[c + 1] + polar.S[c + 2];
            good = std::abs(d4) <= d4_cap;
        }
        ok[j] = good;
    }
    return ok;
}

WaveField polar_recompose(const PolarField& polar) {
    WaveField out;
    out.grid = polar.grid;
    out.time = polar.time;
    out.values.resize(polar.R.size());
    for (std::size_t j = 0; j < polar.R.size(); ++j) {
        if (polar.node_mask[j]) {
            out.values[j] = polar.masked_values[j];
        } else {
            out.values[j] = polar.R[j] * std::exp(cplx(0.0, polar.S[j] / polar.hbar));
        }
    }
    return out;
}

}  // namespace bohmlab
