#ifndef QTRAJ_FIELD_MODE_HPP
#define QTRAJ_FIELD_MODE_HPP

#include <vector>

#include "qtraj/wave_model.hpp"

namespace qtraj {

/// A single radiation mode with complex amplitude beable q and wave
/// functional Psi = alpha Psi_0 + beta Psi_1, where (with w = k c)
///
///   Psi_0 = sqrt(2w/pi) exp(-w |q|^2) e^{-i E0 t},            E0 = w,
///   Psi_1 = sqrt(2w/pi) sqrt(2w) q exp(-w |q|^2) e^{-i E1 t}, E1 = 2w.
///
/// The convention is fixed by requiring both to solve the mode Schroedinger
/// equation for H = Pi Pi* + k^2 c^2 q q* (so -d^2/dq dq* as kinetic term);
/// one photon is then exactly one quantum w above the ground state. The
/// ground-state energy offset is unobservable and chosen for this H.
struct ModeState {
    double k = 1.0;
    double c = 1.0;
    Complex alpha = {1.0, 0.0};
    Complex beta = {0.0, 0.0};
    /// Node threshold relative to the 2kc/pi density scale.
    double rho_min = 1e-12;

    double omega() const { return k * c; }
    double energy_ground() const { return omega(); }
    double energy_one_photon() const { return 2.0 * omega(); }

    void validate() const;
    /// Scales (alpha, beta) to |alpha|^2 + |beta|^2 = 1.
    void normalize();
};

/// Mode amplitude beable and its conjugate momentum Pi = dq*/dt.
struct ModeBeable {
    Complex q;
    Complex pi;
};

struct ModeBeablePath {
    std::vector<double> times;
    std::vector<ModeBeable> states;
    bool aborted = false;
};

/// Psi(q, t) in the convention above; unit normalized over the complex plane.
Complex mode_wavefunctional(const ModeState& state, Complex q, double t);

/// |Psi(q, t)|^2.
double mode_density(const ModeState& state, Complex q, double t);

/// Guidance velocity dq/dt = ds/dq* with s the phase of Psi. Closed forms:
/// ground state -> 0, pure one-photon -> i q / (2 |q|^2). NodeError at
/// functional nodes.
Complex mode_velocity(const ModeState& state, Complex q, double t);

/// Residual of the mode Hamilton-Jacobi equation
///   ds/dt + (ds/dq)(ds/dq*) + (kc)^2 |q|^2 + Q_mode,
/// with Q_mode = -(1/R) d^2 R / dq dq*. Zero for the supported states.
double mode_hj_residual(const ModeState& state, Complex q, double t);

/// RK4 on the guidance velocity. A node hit mid-integration truncates the
/// path with aborted status; a node at the start throws NodeError.
ModeBeablePath evolve_mode_beable(const ModeState& state, Complex q0, double t0,
                                  double t1, double dt);

}  // namespace qtraj

#endif
