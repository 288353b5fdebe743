#include "qtraj/weak_measurement.hpp"

#include <algorithm>
#include <cmath>

#include "qtraj/errors.hpp"
#include "qtraj/rng.hpp"

namespace qtraj {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865476;
}

CouplingConfig CouplingConfig::from_eta(double eta) {
    CouplingConfig cfg;
    cfg.strength_d = eta;
    cfg.duration = 1.0;
    return cfg;
}

void CouplingConfig::validate() const {
    if (!(duration >= 0.0)) throw ValidationError("coupling duration must be >= 0");
    const double n = std::norm(c_plus) + std::norm(c_minus);
    if (std::abs(n - 1.0) > 1e-12)
        throw ValidationError("pointer coefficients must be normalized");
}

ReadoutBasis::ReadoutBasis(std::array<std::array<Complex, 2>, 2> coeffs) : b(coeffs) {
    // rows of a unitary are orthonormal
    const Complex r00 = b[0][0], r01 = b[0][1], r10 = b[1][0], r11 = b[1][1];
    const double n0 = std::norm(r00) + std::norm(r01);
    const double n1 = std::norm(r10) + std::norm(r11);
    const Complex cross = std::conj(r00) * r10 + std::conj(r01) * r11;
    if (std::abs(n0 - 1.0) > 1e-12 || std::abs(n1 - 1.0) > 1e-12 ||
        std::abs(cross) > 1e-12)
        throw ValidationError("readout basis change is not unitary");
}

const ReadoutBasis& ReadoutBasis::circular() {
    static const ReadoutBasis basis({{{Complex(kInvSqrt2, 0.0), Complex(0.0, -kInvSqrt2)},
                                      {Complex(kInvSqrt2, 0.0), Complex(0.0, kInvSqrt2)}}});
    return basis;
}

double coupling_eta(double strength_d, double duration) {
    if (!(duration >= 0.0)) throw ValidationError("coupling duration must be >= 0");
    return strength_d * duration;
}

PointerState pointer_after_weak_coupling(const CouplingConfig& cfg, Complex w) {
    cfg.validate();
    const double eta = cfg.eta();
    // d_+- = c_+- exp(-+ i eta w). Factor out the larger real exponent so one
    // weight is O(1) regardless of eta * Im w.
    const double re_exp = eta * w.imag();  // |d_+| carries e^{+re_exp}
    const double shift = std::abs(re_exp);
    const Complex phase_p = std::exp(Complex(re_exp - shift, -eta * w.real()));
    const Complex phase_m = std::exp(Complex(-re_exp - shift, eta * w.real()));

    Complex dp = cfg.c_plus * phase_p;
    Complex dm = cfg.c_minus * phase_m;
    const double norm = std::sqrt(std::norm(dp) + std::norm(dm));
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw DegenerateError("pointer coefficients underflowed after weak coupling");

    PointerState out;
    out.d_plus = dp / norm;
    out.d_minus = dm / norm;
    out.normalized = true;
    return out;
}

std::pair<double, double> readout_probabilities(const PointerState& pointer,
                                                const ReadoutBasis& basis) {
    if (!pointer.normalized) throw ValidationError("pointer state not normalized");
    const Complex a_r = basis.b[0][0] * pointer.d_plus + basis.b[0][1] * pointer.d_minus;
    const Complex a_l = basis.b[1][0] * pointer.d_plus + basis.b[1][1] * pointer.d_minus;
    return {std::norm(a_r), std::norm(a_l)};
}

CountRecord sample_counts(double p_right, std::uint64_t n_total, std::mt19937_64& rng) {
    if (!(p_right >= 0.0 && p_right <= 1.0))
        throw ValidationError("p_right must lie in [0, 1]");
    CountRecord rec;
    if (n_total == 0) return rec;
    std::binomial_distribution<std::uint64_t> bin(n_total, p_right);
    rec.n_right = bin(rng);
    rec.n_left = n_total - rec.n_right;
    return rec;
}

CountRecord sample_counts(double p_right, std::uint64_t n_total, std::uint64_t seed) {
    auto rng = make_engine(seed);
    return sample_counts(p_right, n_total, rng);
}

double extract_weak_value(const CountRecord& counts, double eta) {
    if (counts.n_total() == 0) throw EmptyCountsError("no counts to extract from");
    const double asym =
        (static_cast<double>(counts.n_right) - static_cast<double>(counts.n_left)) /
        static_cast<double>(counts.n_total());
    return std::asin(std::clamp(asym, -1.0, 1.0)) / (2.0 * eta);
}

double extract_weak_value_noiseless(double p_right, double eta) {
    const double asym = std::clamp(2.0 * p_right - 1.0, -1.0, 1.0);
    return std::asin(asym) / (2.0 * eta);
}

double extract_osmotic(const CountRecord& counts, double eta) {
    if (counts.n_total() == 0) throw EmptyCountsError("no counts to extract from");
    const double asym =
        (static_cast<double>(counts.n_right) - static_cast<double>(counts.n_left)) /
        static_cast<double>(counts.n_total());
    if (std::abs(asym) >= 1.0)
        throw DomainError("count asymmetry saturated; atanh diverges");
    return std::atanh(asym) / (2.0 * eta);
}

double remainder_magnitude(const WaveModel& model, double x, double t, double eta) {
    return 0.5 * eta * eta * std::abs(weak_momentum_variance(model, x, t));
}

bool weak_regime_ok(const WaveModel& model, double x, double t, double eta) {
    const double rem = remainder_magnitude(model, x, t, eta);
    return rem < 0.01 * std::abs(eta * weak_momentum(model, x, t));
}

Complex weak_value_general(const ComplexMatrix& op, const std::vector<Complex>& pre,
                           const std::vector<Complex>& post) {
    const std::size_t d = op.dim;
    if (pre.size() != d || post.size() != d)
        throw ValidationError("state dimension does not match operator");

    double norm_pre = 0.0, norm_post = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        norm_pre += std::norm(pre[i]);
        norm_post += std::norm(post[i]);
    }
    if (!(norm_pre > 0.0) || !(norm_post > 0.0))
        throw ValidationError("pre and post states must be nonzero");

    Complex numer = 0.0, denom = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        Complex row = 0.0;
        for (std::size_t j = 0; j < d; ++j) row += op(i, j) * pre[j];
        numer += std::conj(post[i]) * row;
        denom += std::conj(post[i]) * pre[i];
    }
    if (std::abs(denom) < 1e-14 * std::sqrt(norm_pre) * std::sqrt(norm_post))
        throw OrthogonalPostselectionError("post-selected state orthogonal to pre state");
    return numer / denom;
}

}  // namespace qtraj
