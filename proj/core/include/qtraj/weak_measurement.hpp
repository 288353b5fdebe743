#ifndef QTRAJ_WEAK_MEASUREMENT_HPP
#define QTRAJ_WEAK_MEASUREMENT_HPP

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "qtraj/wave_model.hpp"

namespace qtraj {

/// Two-level pointer weakly coupled to the measured operator with scalar
/// strength eta = D * delta_t. The coupling eigenvalues are +1 / -1; field
/// magnitudes and dipole constants are folded into D.
struct CouplingConfig {
    double strength_d = 0.05;
    double duration = 1.0;
    Complex c_plus = {1.0 / 1.4142135623730951, 0.0};
    Complex c_minus = {1.0 / 1.4142135623730951, 0.0};

    static CouplingConfig from_eta(double eta);

    double eta() const { return strength_d * duration; }
    /// Checks delta_t >= 0 and |c+|^2 + |c-|^2 = 1 (to 1e-12).
    void validate() const;
};

/// Pointer coefficients in the coupling eigenbasis after the weak interaction.
struct PointerState {
    Complex d_plus;
    Complex d_minus;
    bool normalized = false;
};

/// Change of basis from coupling eigenstates to readout states:
/// b[r][n] = <mu_r | xi_n>. Must be unitary to 1e-12.
struct ReadoutBasis {
    std::array<std::array<Complex, 2>, 2> b;

    ReadoutBasis(std::array<std::array<Complex, 2>, 2> coeffs);

    /// Circular pair mu_R = (xi_+ + i xi_-)/sqrt2, mu_L = (xi_+ - i xi_-)/sqrt2.
    /// Turns the weak-value phase into a right/left count asymmetry.
    static const ReadoutBasis& circular();
};

struct CountRecord {
    std::uint64_t n_right = 0;
    std::uint64_t n_left = 0;

    std::uint64_t n_total() const { return n_right + n_left; }
};

/// eta = D * delta_t (rectangular coupling pulse).
double coupling_eta(double strength_d, double duration);

/// Exponentiated pointer update d_+- = c_+- exp(-+ i eta w), renormalized.
/// Keeps all orders of the single weak value; complex w introduces real
/// weights exp(+- eta Im w). Throws DegenerateError if both coefficients
/// underflow.
PointerState pointer_after_weak_coupling(const CouplingConfig& cfg, Complex w);

/// (p_right, p_left) for a strong readout in the given basis:
/// p_r = |sum_n b[r][n] d_n|^2.
std::pair<double, double> readout_probabilities(const PointerState& pointer,
                                                const ReadoutBasis& basis);

/// n_right ~ Binomial(n_total, p_right) from the supplied engine.
CountRecord sample_counts(double p_right, std::uint64_t n_total, std::mt19937_64& rng);
CountRecord sample_counts(double p_right, std::uint64_t n_total, std::uint64_t seed);

/// Re w estimate: arcsin((n_R - n_L)/n_total) / (2 eta). The gain 1/(2 eta)
/// follows from the circular readout of the +-1 pointer; it is computed, not
/// fitted. The arcsin argument is clamped to [-1, 1] (estimator saturation
/// under finite-sample fluctuations).
double extract_weak_value(const CountRecord& counts, double eta);

/// Noiseless (n -> infinity) version operating on the exact probability.
double extract_weak_value_noiseless(double p_right, double eta);

/// Im w estimate from counts taken in the coupling eigenbasis itself, where
/// asym = tanh(2 eta Im w): returns atanh(asym) / (2 eta). Experimental.
/// Throws DomainError when |asym| = 1.
double extract_osmotic(const CountRecord& counts, double eta);

/// Magnitude of the leading neglected term of the coupling expansion:
/// eta^2/2 * |<P^2>_W - <P>_W^2|. The weak regime heuristic used in docs is
/// remainder < 0.01 * |eta * <P>_W|.
double remainder_magnitude(const WaveModel& model, double x, double t, double eta);

/// True when the remainder heuristic above holds at (x, t).
bool weak_regime_ok(const WaveModel& model, double x, double t, double eta);

/// Small dense complex matrix for the general weak-value ratio.
struct ComplexMatrix {
    std::size_t dim = 0;
    std::vector<Complex> a;  // row-major dim x dim

    ComplexMatrix(std::size_t d) : dim(d), a(d * d) {}
    Complex& operator()(std::size_t r, std::size_t c) { return a[r * dim + c]; }
    Complex operator()(std::size_t r, std::size_t c) const { return a[r * dim + c]; }
};

/// <post|A|pre> / <post|pre>. No magnitude restriction: anomalous values
/// outside the eigenvalue range are the point. Throws
/// OrthogonalPostselectionError when |<post|pre>| < 1e-14 * |post| * |pre|.
Complex weak_value_general(const ComplexMatrix& op, const std::vector<Complex>& pre,
                           const std::vector<Complex>& post);

}  // namespace qtraj

#endif
