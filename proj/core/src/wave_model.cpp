#include "qtraj/wave_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qtraj/errors.hpp"

namespace qtraj {

namespace {

constexpr double kQuarterLog2Pi = 0.45946934673215993;  // ln(2*pi)/4

// Per-packet log-amplitude and log-derivative ratios. Everything downstream
// is assembled from these, so each formula appears exactly once.
struct PacketTerms {
    Complex xi;   // log psi_j (phase offsets folded in)
    Complex lx;   // psi'/psi
    Complex lxx;  // psi''/psi
    Complex lt;   // (d psi/dt)/psi
};

PacketTerms packet_terms(const WaveModel& m, double xj, double kj, double phase,
                         double x, double t) {
    const Complex st = m.spread(t);
    const double u = x - xj - kj * t / m.mass;
    const Complex a = 1.0 / (4.0 * m.sigma0 * st);
    const Complex st_dot(0.0, 1.0 / (2.0 * m.mass * m.sigma0));

    PacketTerms p;
    p.xi = -kQuarterLog2Pi - 0.5 * std::log(st) - u * u * a +
           Complex(0.0, kj * x - kj * kj * t / (2.0 * m.mass) + phase);
    p.lx = -2.0 * a * u + Complex(0.0, kj);
    p.lxx = p.lx * p.lx - 2.0 * a;
    p.lt = -st_dot / (2.0 * st) + 2.0 * u * (kj / m.mass) * a +
           u * u * a * st_dot / st - Complex(0.0, kj * kj / (2.0 * m.mass));
    if (m.gauge_phase) {
        p.xi += Complex(0.0, -m.v0 * t);
        p.lt += Complex(0.0, -m.v0);
    }
    return p;
}

// Combined log-derivatives of the two-packet superposition, evaluated with the
// dominant exponent factored out so ratios stay accurate deep in one tail.
struct Combined {
    Complex w;       // sum of shifted packet weights; psi = w * exp(scale)
    double scale;    // max packet log-amplitude (real part), plus log norm
    Complex lx_num;  // sum w_j * (psi'/psi)_j
    Complex lxx_num;
    Complex lt_num;
};

Combined combine(const WaveModel& m, double x, double t) {
    const PacketTerms p1 = packet_terms(m, m.slit_x1, m.tilt_k1, 0.0, x, t);
    const PacketTerms p2 = packet_terms(m, m.slit_x2, m.tilt_k2, m.rel_phase, x, t);
    const double log_n = std::log(m.norm_constant());

    Combined c;
    c.scale = std::max(p1.xi.real(), p2.xi.real()) + log_n;
    const Complex w1 = std::exp(p1.xi + log_n - c.scale);
    const Complex w2 = std::exp(p2.xi + log_n - c.scale);
    c.w = w1 + w2;
    c.lx_num = w1 * p1.lx + w2 * p2.lx;
    c.lxx_num = w1 * p1.lxx + w2 * p2.lxx;
    c.lt_num = w1 * p1.lt + w2 * p2.lt;
    return c;
}

double log_density_ratio(const WaveModel& m, const Combined& c, double t) {
    const double w2 = std::norm(c.w);
    if (w2 == 0.0) return -std::numeric_limits<double>::infinity();
    return 2.0 * c.scale + std::log(w2) - std::log(m.density_scale(t));
}

void require_above_node(const WaveModel& m, const Combined& c, double x, double t) {
    if (log_density_ratio(m, c, t) < std::log(m.rho_min)) {
        throw NodeError("density below node threshold at x=" + std::to_string(x) +
                        ", t=" + std::to_string(t));
    }
}

}  // namespace

void WaveModel::validate() const {
    if (!(mass > 0.0)) throw ValidationError("mass must be > 0");
    if (!(sigma0 > 0.0)) throw ValidationError("sigma0 must be > 0");
    if (!(rho_min > 0.0 && rho_min < 1.0))
        throw ValidationError("rho_min must lie in (0, 1)");
    for (double v : {mass, slit_x1, slit_x2, sigma0, tilt_k1, tilt_k2, rel_phase,
                     v0, p_y}) {
        if (!std::isfinite(v)) throw ValidationError("non-finite model parameter");
    }
    // Fully destructive packet pair: |psi| == 0 everywhere.
    const double dx = slit_x1 - slit_x2;
    const double dk = tilt_k2 - tilt_k1;
    const double xb = 0.5 * (slit_x1 + slit_x2);
    const Complex overlap = std::exp(Complex(
        -dx * dx / (8.0 * sigma0 * sigma0) - dk * dk * sigma0 * sigma0 / 2.0,
        dk * xb));
    const double denom = 2.0 + 2.0 * (std::exp(Complex(0.0, rel_phase)) * overlap).real();
    if (denom < 1e-12)
        throw ValidationError("degenerate two-packet superposition (norm vanishes)");
}

Complex WaveModel::spread(double t) const {
    return sigma0 * Complex(1.0, t / (2.0 * mass * sigma0 * sigma0));
}

double WaveModel::sigma_t(double t) const { return std::abs(spread(t)); }

double WaveModel::norm_constant() const {
    const double dx = slit_x1 - slit_x2;
    const double dk = tilt_k2 - tilt_k1;
    const double xb = 0.5 * (slit_x1 + slit_x2);
    const Complex overlap = std::exp(Complex(
        -dx * dx / (8.0 * sigma0 * sigma0) - dk * dk * sigma0 * sigma0 / 2.0,
        dk * xb));
    return 1.0 / std::sqrt(2.0 + 2.0 * (std::exp(Complex(0.0, rel_phase)) * overlap).real());
}

double WaveModel::density_scale(double t) const {
    // |psi| <= 2 N max_j |psi_j| pointwise, and |psi_j|^2 <= (2 pi |s_t|^2)^{-1/2}.
    const double n = norm_constant();
    return 4.0 * n * n / std::sqrt(2.0 * std::numbers::pi) / sigma_t(t);
}

Complex eval_psi(const WaveModel& model, double x, double t) {
    const Combined c = combine(model, x, t);
    return c.w * std::exp(c.scale);
}

double log_density_ratio(const WaveModel& model, double x, double t) {
    const Combined c = combine(model, x, t);
    return log_density_ratio(model, c, t);
}

FieldSample field_sample(const WaveModel& model, double x, double t) {
    const Combined c = combine(model, x, t);
    require_above_node(model, c, x, t);

    const Complex lx = c.lx_num / c.w;    // psi'/psi
    const Complex lxx = c.lxx_num / c.w;  // psi''/psi
    const Complex lt = c.lt_num / c.w;    // d_t psi / psi

    FieldSample s;
    s.x = x;
    s.t = t;
    s.psi = c.w * std::exp(c.scale);
    s.rho = std::norm(c.w) * std::exp(2.0 * c.scale);
    s.p_bohm = lx.imag();
    s.p_osmotic = lx.real();
    // Q = -[(Re u)^2 + Re u'] / 2m with u = psi'/psi, u' = psi''/psi - u^2.
    s.q_pot = -(lx.real() * lx.real() + (lxx - lx * lx).real()) / (2.0 * model.mass);
    s.e_bohm = -lt.imag();
    s.hj_residual = lt.imag() + s.p_bohm * s.p_bohm / (2.0 * model.mass) + s.q_pot +
                    model.v0;
    return s;
}

double hj_residual(const WaveModel& model, double x, double t) {
    return field_sample(model, x, t).hj_residual;
}

Complex weak_momentum(const WaveModel& model, double x, double t) {
    const Combined c = combine(model, x, t);
    require_above_node(model, c, x, t);
    const Complex lx = c.lx_num / c.w;
    // grad S - i grad rho / 2 rho; same decomposition field_sample exports.
    return Complex(lx.imag(), -lx.real());
}

Complex weak_momentum_second(const WaveModel& model, double x, double t) {
    const Combined c = combine(model, x, t);
    require_above_node(model, c, x, t);
    return -c.lxx_num / c.w;
}

Complex weak_momentum_variance(const WaveModel& model, double x, double t) {
    const Combined c = combine(model, x, t);
    require_above_node(model, c, x, t);
    const Complex lx = c.lx_num / c.w;
    const Complex lxx = c.lxx_num / c.w;
    // -psi''/psi - (-i psi'/psi)^2 = -(psi''/psi) + (psi'/psi)^2
    return -lxx + lx * lx;
}

EnergyMomentumDensities em_densities(const WaveModel& model, double x, double t) {
    const Combined c = combine(model, x, t);
    EnergyMomentumDensities d;
    const double scale2 = std::exp(2.0 * c.scale);
    // rho * (psi'/psi) = conj(psi) psi' up to the common scale; finite at nodes.
    d.t0i = (std::conj(c.w) * c.lx_num).imag() * scale2;
    d.t00 = -(std::conj(c.w) * c.lt_num).imag() * scale2;
    return d;
}

}  // namespace qtraj
