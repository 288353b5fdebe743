#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qtraj/errors.hpp"
#include "qtraj/wave_model.hpp"
#include "test_common.hpp"

using namespace qtraj;
using test_common::default_two_slit;
using test_common::rel_err;
using test_common::single_gaussian;

TEST_CASE("single-slit amplitude at the packet center is the Gaussian norm") {
    const WaveModel m = single_gaussian();
    // |psi(0,0)| = (2 pi sigma0^2)^{-1/4}
    const double expected = std::pow(2.0 * std::numbers::pi * m.sigma0 * m.sigma0, -0.25);
    CHECK(std::abs(eval_psi(m, 0.0, 0.0)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("two-slit wavefunction is unit normalized (quadrature oracle)") {
    const WaveModel m = default_two_slit();
    for (double t : {0.0, 1.7, 4.0}) {
        const double st = m.sigma_t(t);
        const double lo = m.slit_x1 - 9.0 * st, hi = m.slit_x2 + 9.0 * st;
        const int n = 20001;
        const double h = (hi - lo) / (n - 1);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            sum += w * std::norm(eval_psi(m, lo + i * h, t));
        }
        CHECK(sum * h == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("symmetric model is mirror symmetric: psi(x,t) = psi(-x,t)") {
    const WaveModel m = default_two_slit();
    auto rng = make_engine(11);
    for (int i = 0; i < 50; ++i) {
        const double x = test_common::uniform_in(rng, 0.0, 8.0);
        const double t = test_common::uniform_in(rng, 0.0, 4.0);
        const Complex a = eval_psi(m, x, t);
        const Complex b = eval_psi(m, -x, t);
        CHECK(std::abs(a - b) <= 1e-14 * std::max(1e-30, std::abs(a)));
    }
}

TEST_CASE("spatial derivative matches the central finite difference") {
    const WaveModel m = default_two_slit();
    const double x = 0.7 * m.sigma0, t = 0.3, h = 1e-6 * m.sigma0;
    const Complex fd = test_common::fd_dpsi_dx(m, x, t, h);
    const FieldSample s = field_sample(m, x, t);
    const Complex analytic = s.psi * Complex(s.p_osmotic, s.p_bohm);  // psi * psi'/psi
    CHECK(rel_err(analytic, fd, 1e-12) < 1e-5);
}

TEST_CASE("all analytic derivatives match finite differences at 100 random points") {
    const WaveModel m = default_two_slit();
    auto rng = make_engine(29);
    int tested = 0;
    while (tested < 100) {
        const double x = test_common::uniform_in(rng, -9.0, 9.0);
        const double t = test_common::uniform_in(rng, 0.0, 4.0);
        if (log_density_ratio(m, x, t) < std::log(m.rho_min)) continue;
        ++tested;

        const Complex psi = eval_psi(m, x, t);
        const Complex lx = Complex(field_sample(m, x, t).p_osmotic,
                                   field_sample(m, x, t).p_bohm);
        const Complex dpsi_dx = psi * lx;
        const Complex d2psi_dx2 = -psi * weak_momentum_second(m, x, t);
        // e_bohm and the HJ residual fix Im(psi_t/psi); recover the full time
        // derivative from the sample for the oracle comparison.
        const FieldSample s = field_sample(m, x, t);
        const Complex fd_t = test_common::fd_dpsi_dt(m, x, t);
        const Complex fd_x = test_common::fd_dpsi_dx(m, x, t);
        const Complex fd_xx = test_common::fd_d2psi_dx2(m, x, t);

        const double scale = std::abs(psi);
        CHECK(rel_err(dpsi_dx, fd_x, scale) < 1e-5);
        CHECK(rel_err(d2psi_dx2, fd_xx, scale) < 1e-5);
        // time derivative: compare the exported -Im(psi_t/psi) against FD
        const double e_bohm_fd = -(fd_t / psi).imag();
        CHECK(std::abs(s.e_bohm - e_bohm_fd) <
              1e-5 * std::max({std::abs(s.e_bohm), std::abs(e_bohm_fd), 1e-3}));
    }
}

TEST_CASE("resting Gaussian: p_bohm vanishes at t=0 for any x") {
    const WaveModel m = single_gaussian();
    for (double x : {-2.3, -0.5, 0.0, 1.1, 3.7})
        CHECK(field_sample(m, x, 0.0).p_bohm == 0.0);
}

TEST_CASE("resting Gaussian: osmotic momentum at x = sigma0 is -1/(2 sigma0)") {
    for (double s0 : {1.0, 2.5}) {
        const WaveModel m = single_gaussian(s0);
        CHECK(field_sample(m, s0, 0.0).p_osmotic ==
              doctest::Approx(-1.0 / (2.0 * s0)).epsilon(1e-12));
    }
}

TEST_CASE("symmetric two-slit model: p_bohm = 0 on the axis at any time") {
    const WaveModel m = default_two_slit();
    for (double t : {0.0, 0.9, 2.2, 4.0})
        CHECK(field_sample(m, 0.0, t).p_bohm == 0.0);
}

TEST_CASE("resting Gaussian: quantum potential at the center is 1/(4 m sigma0^2)") {
    for (double s0 : {1.0, 3.0}) {
        WaveModel m = single_gaussian(s0);
        m.mass = 1.7;
        CHECK(field_sample(m, 0.0, 0.0).q_pot ==
              doctest::Approx(1.0 / (4.0 * m.mass * s0 * s0)).epsilon(1e-12));
    }
}

TEST_CASE("Hamilton-Jacobi residual vanishes for the exact model") {
    const WaveModel m = default_two_slit();
    CHECK(std::abs(hj_residual(m, 0.3 * m.sigma0, 0.0)) < 1e-8);
    CHECK(std::abs(hj_residual(m, 1.9 * m.sigma0, 2.5)) < 1e-8);

    auto rng = make_engine(41);
    int tested = 0;
    while (tested < 100) {
        const double x = test_common::uniform_in(rng, -9.0, 9.0);
        const double t = test_common::uniform_in(rng, 0.0, 4.0);
        if (log_density_ratio(m, x, t) < std::log(m.rho_min)) continue;
        ++tested;
        CHECK(std::abs(hj_residual(m, x, t)) < 1e-8);
    }
}

TEST_CASE("constant potential: gauge-corrected phase cancels, uncorrected shifts by v0") {
    WaveModel gauged = default_two_slit();
    gauged.v0 = 0.7;
    gauged.gauge_phase = true;
    CHECK(std::abs(hj_residual(gauged, 0.4, 1.2)) < 1e-12);
    // e_bohm picks up the offset
    WaveModel free = default_two_slit();
    CHECK(field_sample(gauged, 0.4, 1.2).e_bohm ==
          doctest::Approx(field_sample(free, 0.4, 1.2).e_bohm + 0.7).epsilon(1e-12));

    WaveModel ungauged = default_two_slit();
    ungauged.v0 = 0.7;
    ungauged.gauge_phase = false;
    CHECK(hj_residual(ungauged, 0.4, 1.2) == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("weak momentum decomposition is exact: w = p_bohm - i p_osmotic") {
    const WaveModel m = default_two_slit();
    auto rng = make_engine(53);
    for (int i = 0; i < 50; ++i) {
        const double x = test_common::uniform_in(rng, -6.0, 6.0);
        const double t = test_common::uniform_in(rng, 0.0, 4.0);
        const FieldSample s = field_sample(m, x, t);
        const Complex w = weak_momentum(m, x, t);
        CHECK(w.real() == s.p_bohm);      // same code path, bit identical
        CHECK(w.imag() == -s.p_osmotic);
    }
}

TEST_CASE("weak momentum of a tilted packet equals the tilt at the moving center") {
    const double k0 = 1.3;
    const WaveModel m = single_gaussian(1.0, k0);
    for (double t : {0.0, 0.8, 2.0}) {
        const double center = k0 * t / m.mass;
        const Complex w = weak_momentum(m, center, t);
        CHECK(w.real() == doctest::Approx(k0).epsilon(1e-14));
        CHECK(w.imag() == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("weak momentum agrees with -i (fd psi')/psi") {
    const WaveModel m = default_two_slit();
    auto rng = make_engine(61);
    int tested = 0;
    while (tested < 100) {
        const double x = test_common::uniform_in(rng, -8.0, 8.0);
        const double t = test_common::uniform_in(rng, 0.0, 4.0);
        if (log_density_ratio(m, x, t) < std::log(1e-9)) continue;
        ++tested;
        const Complex oracle =
            Complex(0.0, -1.0) * test_common::fd_dpsi_dx(m, x, t) / eval_psi(m, x, t);
        CHECK(rel_err(weak_momentum(m, x, t), oracle, 1e-4) < 1e-5);
    }
}

TEST_CASE("weak P^2: Gaussian center value and finite-difference oracle") {
    const WaveModel g = single_gaussian();
    CHECK(weak_momentum_second(g, 0.0, 0.0).real() ==
          doctest::Approx(1.0 / (2.0 * g.sigma0 * g.sigma0)).epsilon(1e-12));
    CHECK(weak_momentum_second(g, 0.0, 0.0).imag() == doctest::Approx(0.0));

    const WaveModel m = default_two_slit();
    auto rng = make_engine(71);
    int tested = 0;
    while (tested < 100) {
        const double x = test_common::uniform_in(rng, -8.0, 8.0);
        const double t = test_common::uniform_in(rng, 0.0, 4.0);
        if (log_density_ratio(m, x, t) < std::log(1e-9)) continue;
        ++tested;
        const Complex oracle =
            -test_common::fd_d2psi_dx2(m, x, t) / eval_psi(m, x, t);
        CHECK(rel_err(weak_momentum_second(m, x, t), oracle, 1e-3) < 1e-5);
    }
}

TEST_CASE("weak momentum variance vanishes in the tilted plane-wave limit") {
    const WaveModel wide = single_gaussian(500.0, 3.0);
    const double center = 3.0 * 0.5 / wide.mass;
    CHECK(std::abs(weak_momentum_variance(wide, center, 0.5)) < 1e-5);
}

TEST_CASE("phase quantities are refused at nodes") {
    WaveModel dark = default_two_slit();
    dark.rel_phase = std::numbers::pi;  // exact node line on the axis
    CHECK_THROWS_AS((void)field_sample(dark, 0.0, 1.0), NodeError);
    CHECK_THROWS_AS((void)weak_momentum(dark, 0.0, 1.0), NodeError);
    CHECK_THROWS_AS((void)hj_residual(dark, 0.0, 1.0), NodeError);

    // em densities stay total and vanish there
    const EnergyMomentumDensities d = em_densities(dark, 0.0, 1.0);
    CHECK(d.t0i == doctest::Approx(0.0).epsilon(1e-30));
    CHECK(d.t00 == doctest::Approx(0.0).epsilon(1e-30));
}

TEST_CASE("energy-momentum densities match rho * (E_B, P_B) pointwise") {
    const WaveModel m = default_two_slit();
    for (int i = 0; i < 100; ++i) {
        const double x = -6.0 + 12.0 * i / 99.0;
        const double t = 1.3;
        const FieldSample s = field_sample(m, x, t);
        const EnergyMomentumDensities d = em_densities(m, x, t);
        CHECK(d.t0i ==
              doctest::Approx(s.rho * s.p_bohm).epsilon(1e-12).scale(std::abs(s.rho)));
        CHECK(d.t00 ==
              doctest::Approx(s.rho * s.e_bohm).epsilon(1e-12).scale(std::abs(s.rho)));
    }
}

TEST_CASE("resting Gaussian carries no momentum density at t=0") {
    const WaveModel m = single_gaussian();
    for (double x : {-3.0, -1.0, 0.0, 0.7, 2.9})
        CHECK(em_densities(m, x, 0.0).t0i == 0.0);
}

TEST_CASE("symmetry: p_bohm odd, rho and Q even in x") {
    const WaveModel m = default_two_slit();
    auto rng = make_engine(83);
    for (int i = 0; i < 40; ++i) {
        const double x = test_common::uniform_in(rng, 0.1, 6.0);
        const double t = test_common::uniform_in(rng, 0.0, 4.0);
        const FieldSample a = field_sample(m, x, t);
        const FieldSample b = field_sample(m, -x, t);
        CHECK(a.p_bohm == doctest::Approx(-b.p_bohm).epsilon(1e-10));
        CHECK(a.rho == doctest::Approx(b.rho).epsilon(1e-10));
        CHECK(a.q_pot == doctest::Approx(b.q_pot).epsilon(1e-9));
    }
}

TEST_CASE("model validation rejects broken parameters") {
    WaveModel m = default_two_slit();
    m.mass = 0.0;
    CHECK_THROWS_AS(m.validate(), ValidationError);

    m = default_two_slit();
    m.sigma0 = -1.0;
    CHECK_THROWS_AS(m.validate(), ValidationError);

    // fully destructive superposition: psi == 0 everywhere
    m = default_two_slit();
    m.slit_x1 = m.slit_x2 = 0.0;
    m.rel_phase = std::numbers::pi;
    CHECK_THROWS_AS(m.validate(), ValidationError);
}
