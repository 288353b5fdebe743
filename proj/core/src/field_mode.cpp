#include "qtraj/field_mode.hpp"

#include <cmath>
#include <numbers>

#include "qtraj/errors.hpp"

namespace qtraj {

namespace {

// Psi factorizes as C e^{-w|q|^2} F(q, t) with F holomorphic in q, so all
// phase derivatives reduce to the log-derivative F'/F.
struct ModeTerms {
    Complex f;      // F(q, t)
    Complex fp;     // dF/dq
    Complex fdot;   // dF/dt
    double gauss;   // exp(-w |q|^2)
    double c0;      // sqrt(2w/pi)
};

ModeTerms mode_terms(const ModeState& s, Complex q, double t) {
    const double w = s.omega();
    const Complex gamma = s.beta * std::sqrt(2.0 * w);
    const Complex e0 = std::exp(Complex(0.0, -s.energy_ground() * t));
    const Complex e1 = std::exp(Complex(0.0, -s.energy_one_photon() * t));

    ModeTerms m;
    m.f = s.alpha * e0 + gamma * q * e1;
    m.fp = gamma * e1;
    m.fdot = Complex(0.0, -s.energy_ground()) * s.alpha * e0 +
             Complex(0.0, -s.energy_one_photon()) * gamma * q * e1;
    m.gauss = std::exp(-w * std::norm(q));
    m.c0 = std::sqrt(2.0 * w / std::numbers::pi);
    return m;
}

void require_above_node(const ModeState& s, const ModeTerms& m, Complex q) {
    // density relative to the 2w/pi scale
    if (m.gauss * m.gauss * std::norm(m.f) < s.rho_min)
        throw NodeError("mode functional below node threshold at q=(" +
                        std::to_string(q.real()) + "," + std::to_string(q.imag()) + ")");
}

}  // namespace

void ModeState::validate() const {
    if (!(k > 0.0)) throw ValidationError("mode wavenumber must be > 0");
    if (!(c > 0.0)) throw ValidationError("mode speed constant must be > 0");
    const double n = std::norm(alpha) + std::norm(beta);
    if (std::abs(n - 1.0) > 1e-12)
        throw ValidationError("mode state must be normalized");
}

void ModeState::normalize() {
    const double n = std::sqrt(std::norm(alpha) + std::norm(beta));
    if (!(n > 0.0)) throw ValidationError("mode state amplitudes are all zero");
    alpha /= n;
    beta /= n;
}

Complex mode_wavefunctional(const ModeState& state, Complex q, double t) {
    state.validate();
    const ModeTerms m = mode_terms(state, q, t);
    return m.c0 * m.gauss * m.f;
}

double mode_density(const ModeState& state, Complex q, double t) {
    return std::norm(mode_wavefunctional(state, q, t));
}

Complex mode_velocity(const ModeState& state, Complex q, double t) {
    state.validate();
    const ModeTerms m = mode_terms(state, q, t);
    require_above_node(state, m, q);
    // s = arg F (the Gaussian factor is real); ds/dq* = (i/2) conj(F'/F).
    return Complex(0.0, 0.5) * std::conj(m.fp / m.f);
}

double mode_hj_residual(const ModeState& state, Complex q, double t) {
    state.validate();
    const ModeTerms m = mode_terms(state, q, t);
    require_above_node(state, m, q);

    const double w = state.omega();
    const Complex l = m.fp / m.f;
    const double sdot = (m.fdot / m.f).imag();
    const double kinetic = 0.25 * std::norm(l);
    const double potential = w * w * std::norm(q);
    // Q_mode = -(1/R) d^2 R / dq dq* with R = C e^{-w |q|^2} |F|; since F is
    // holomorphic the mixed derivative collapses to the closed form below.
    const double q_mode =
        w - w * w * std::norm(q) + w * (q * l).real() - 0.25 * std::norm(l);
    return sdot + kinetic + potential + q_mode;
}

ModeBeablePath evolve_mode_beable(const ModeState& state, Complex q0, double t0,
                                  double t1, double dt) {
    state.validate();
    if (!(t1 > t0)) throw ValidationError("evolve_mode_beable: t1 must be > t0");
    if (!(dt > 0.0)) throw ValidationError("evolve_mode_beable: dt must be > 0");
    // initial node is the caller's error
    (void)mode_velocity(state, q0, t0);

    const auto n_steps = static_cast<std::size_t>(
        std::max<long long>(1, std::llround((t1 - t0) / dt)));
    const double h = (t1 - t0) / static_cast<double>(n_steps);

    ModeBeablePath path;
    path.times.reserve(n_steps + 1);
    path.states.reserve(n_steps + 1);
    path.times.push_back(t0);
    path.states.push_back({q0, std::conj(mode_velocity(state, q0, t0))});

    Complex q = q0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        try {
            const Complex k1 = mode_velocity(state, q, t);
            const Complex k2 = mode_velocity(state, q + 0.5 * h * k1, t + 0.5 * h);
            const Complex k3 = mode_velocity(state, q + 0.5 * h * k2, t + 0.5 * h);
            const Complex k4 = mode_velocity(state, q + h * k3, t + h);
            q += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            const double t_next = t0 + static_cast<double>(i + 1) * h;
            path.times.push_back(t_next);
            path.states.push_back({q, std::conj(mode_velocity(state, q, t_next))});
        } catch (const NodeError&) {
            path.aborted = true;
            break;
        }
    }
    return path;
}

}  // namespace qtraj
