#ifndef QTRAJ_WAVE_MODEL_HPP
#define QTRAJ_WAVE_MODEL_HPP

#include <complex>

namespace qtraj {

using Complex = std::complex<double>;

/// Two freely spreading Gaussian packets released from slit centers x1, x2.
///
/// psi(x,t) = norm * [psi_1(x,t) + e^{i delta} psi_2(x,t)], with each packet
///   psi_j = (2 pi s_t^2)^{-1/4} exp[ -(x - x_j - k_j t/m)^2 / (4 sigma0 s_t)
///                                    + i (k_j x - k_j^2 t / 2m) ],
///   s_t   = sigma0 (1 + i t / (2 m sigma0^2)).
///
/// Units are hbar = 1 throughout. The packet is an exact solution of the free
/// Schroedinger equation, so every derived field has a closed form and the
/// Hamilton-Jacobi residual vanishes identically away from nodes.
///
/// x1 == x2 (with equal tilts, delta = 0) degenerates to a single slit.
struct WaveModel {
    double mass = 1.0;
    double slit_x1 = -2.5;
    double slit_x2 = 2.5;
    double sigma0 = 1.0;
    double tilt_k1 = 0.0;
    double tilt_k2 = 0.0;
    double rel_phase = 0.0;
    /// Constant external potential. With gauge_phase the wavefunction carries
    /// the e^{-i v0 t} factor and remains an exact solution; without it the
    /// Hamilton-Jacobi residual equals v0.
    double v0 = 0.0;
    bool gauge_phase = true;
    /// Longitudinal beam momentum; maps plane times to y = (p_y/m) t.
    double p_y = 10.0;
    /// Node threshold relative to the density scale at time t. Below it,
    /// phase-derivative quantities are refused (NodeError) instead of
    /// returning garbage.
    double rho_min = 1e-12;

    /// Throws ValidationError on m <= 0, sigma0 <= 0, non-finite parameters,
    /// or a destructively degenerate two-packet normalization.
    void validate() const;

    /// Complex spread s_t = sigma0 (1 + i t / (2 m sigma0^2)).
    Complex spread(double t) const;
    /// |s_t|: width of a single packet at time t.
    double sigma_t(double t) const;
    /// Two-packet normalization constant (closed form from the packet overlap).
    double norm_constant() const;
    /// Upper bound on the density at time t, used as node-threshold scale.
    double density_scale(double t) const;
    /// Longitudinal coordinate of the plane at time t.
    double y_of_t(double t) const { return p_y / mass * t; }
};

/// All local quantities derived from psi at one event (x, t).
struct FieldSample {
    double x = 0.0;
    double t = 0.0;
    Complex psi;         // amplitude
    double rho = 0.0;    // |psi|^2
    double p_bohm = 0.0;     // grad S
    double p_osmotic = 0.0;  // grad rho / 2 rho
    double q_pot = 0.0;      // -lap R / 2 m R
    double e_bohm = 0.0;     // -dS/dt
    double hj_residual = 0.0;  // dS/dt + (grad S)^2/2m + Q + V
};

/// Energy and momentum densities of the Schroedinger field.
struct EnergyMomentumDensities {
    double t00 = 0.0;  // rho * E_B
    double t0i = 0.0;  // rho * P_B
};

/// psi(x, t). Total function; underflows to 0 in extreme tails.
Complex eval_psi(const WaveModel& model, double x, double t);

/// All derived fields at (x, t). Throws NodeError below the node threshold.
FieldSample field_sample(const WaveModel& model, double x, double t);

/// dS/dt + (grad S)^2 / 2m + Q + V; zero for the exact model. NodeError at nodes.
double hj_residual(const WaveModel& model, double x, double t);

/// Weak value of momentum post-selected at x: grad S - i grad rho / 2 rho.
/// The real part equals field_sample().p_bohm exactly (same code path).
Complex weak_momentum(const WaveModel& model, double x, double t);

/// Weak value of P^2 post-selected at x: -psi''/psi.
Complex weak_momentum_second(const WaveModel& model, double x, double t);

/// Weak momentum variance <P^2>_W - <P>_W^2. Closed form 1/(2 sigma0 s_t) for
/// a single packet.
Complex weak_momentum_variance(const WaveModel& model, double x, double t);

/// (T00, T0i) = (rho E_B, rho P_B). Total function; exactly zero at nodes.
EnergyMomentumDensities em_densities(const WaveModel& model, double x, double t);

/// log(rho / density_scale). Usable without underflow far into the tails.
double log_density_ratio(const WaveModel& model, double x, double t);

}  // namespace qtraj

#endif
