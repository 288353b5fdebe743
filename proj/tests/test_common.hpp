#ifndef QTRAJ_TEST_COMMON_HPP
#define QTRAJ_TEST_COMMON_HPP

#include <cmath>
#include <complex>
#include <random>

#include "qtraj/rng.hpp"
#include "qtraj/wave_model.hpp"

namespace test_common {

using qtraj::Complex;
using qtraj::WaveModel;

// ---------------------------------------------------------------------------
// Finite-difference oracles. These are deliberately independent of the
// closed-form derivative path: they only call eval_psi. Step sizes trade
// truncation (h^2) against roundoff (eps/h for first, eps/h^2 for second
// derivatives); the chosen values keep both below ~1e-8 at O(1) amplitudes.
// ---------------------------------------------------------------------------

inline Complex fd_dpsi_dx(const WaveModel& m, double x, double t, double h = 1e-5) {
    return (qtraj::eval_psi(m, x + h, t) - qtraj::eval_psi(m, x - h, t)) / (2.0 * h);
}

inline Complex fd_d2psi_dx2(const WaveModel& m, double x, double t, double h = 3e-4) {
    return (qtraj::eval_psi(m, x + h, t) - 2.0 * qtraj::eval_psi(m, x, t) +
            qtraj::eval_psi(m, x - h, t)) /
           (h * h);
}

inline Complex fd_dpsi_dt(const WaveModel& m, double x, double t, double h = 2e-5) {
    return (qtraj::eval_psi(m, x, t + h) - qtraj::eval_psi(m, x, t - h)) / (2.0 * h);
}

/// |a - b| relative to the larger magnitude, with an absolute floor so a
/// derivative passing through zero does not blow the ratio up.
inline double rel_err(Complex a, Complex b, double floor_scale) {
    const double denom = std::max({std::abs(a), std::abs(b), floor_scale});
    return std::abs(a - b) / denom;
}

/// Default two-slit scenario used across the tests (matches the shipped
/// config defaults).
inline WaveModel default_two_slit() {
    return WaveModel{};
}

inline WaveModel single_gaussian(double sigma0 = 1.0, double tilt = 0.0) {
    WaveModel m;
    m.slit_x1 = 0.0;
    m.slit_x2 = 0.0;
    m.sigma0 = sigma0;
    m.tilt_k1 = tilt;
    m.tilt_k2 = tilt;
    return m;
}

/// Uniform draw in [lo, hi) from a seeded engine.
inline double uniform_in(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * qtraj::uniform01(g);
}

}  // namespace test_common

#endif
