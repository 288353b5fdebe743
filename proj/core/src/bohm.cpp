#include "qtraj/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qtraj/errors.hpp"
#include "qtraj/rng.hpp"

namespace qtraj {

namespace {

double bohm_velocity(const WaveModel& model, double x, double t) {
    return field_sample(model, x, t).p_bohm / model.mass;
}

// One classic RK4 step; any stage below the node threshold throws NodeError.
double rk4_step(const WaveModel& model, double x, double t, double h) {
    const double k1 = bohm_velocity(model, x, t);
    const double k2 = bohm_velocity(model, x + 0.5 * h * k1, t + 0.5 * h);
    const double k3 = bohm_velocity(model, x + 0.5 * h * k2, t + 0.5 * h);
    const double k4 = bohm_velocity(model, x + h * k3, t + h);
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

constexpr int kMaxHalvings = 8;

}  // namespace

const char* to_string(TrajectoryStatus s) {
    return s == TrajectoryStatus::completed ? "completed" : "aborted-at-node";
}

std::size_t TrajectoryEnsemble::aborted_count() const {
    return static_cast<std::size_t>(
        std::count_if(trajectories.begin(), trajectories.end(), [](const Trajectory& t) {
            return t.status == TrajectoryStatus::aborted_at_node;
        }));
}

std::vector<double> sample_initial_positions(const WaveModel& model, std::size_t n,
                                             double t0, std::uint64_t seed) {
    const double st = model.sigma_t(t0);
    const double c1 = model.slit_x1 + model.tilt_k1 * t0 / model.mass;
    const double c2 = model.slit_x2 + model.tilt_k2 * t0 / model.mass;
    const double lo = std::min(c1, c2) - 8.0 * st;
    const double hi = std::max(c1, c2) + 8.0 * st;
    return sample_initial_positions_in(model, n, t0, seed, lo, hi);
}

std::vector<double> sample_initial_positions_in(const WaveModel& model, std::size_t n,
                                                double t0, std::uint64_t seed,
                                                double lo, double hi) {
    model.validate();
    constexpr std::size_t kGrid = 1u << 14;
    const double h = (hi - lo) / static_cast<double>(kGrid - 1);

    std::vector<double> x(kGrid), cdf(kGrid);
    std::vector<double> rho(kGrid);
    for (std::size_t i = 0; i < kGrid; ++i) {
        x[i] = lo + h * static_cast<double>(i);
        rho[i] = std::norm(eval_psi(model, x[i], t0));
    }
    cdf[0] = 0.0;
    for (std::size_t i = 1; i < kGrid; ++i)
        cdf[i] = cdf[i - 1] + 0.5 * (rho[i] + rho[i - 1]) * h;

    const double total = cdf.back();
    if (std::abs(total - 1.0) > 1e-6)
        throw GridError("density tabulation normalizes to " + std::to_string(total));

    auto engine = make_engine(seed);
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = uniform01(engine) * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t i = std::min<std::size_t>(
            kGrid - 1, static_cast<std::size_t>(it - cdf.begin()));
        const double c0 = cdf[i - 1], c1 = cdf[i];
        const double f = c1 > c0 ? (u - c0) / (c1 - c0) : 0.0;
        out[k] = x[i - 1] + f * h;
    }
    std::sort(out.begin(), out.end());
    return out;
}

Trajectory integrate_trajectory(const WaveModel& model, double x0, double t0,
                                double t1, double dt) {
    model.validate();
    if (!(t1 > t0)) throw ValidationError("integrate_trajectory: t1 must be > t0");
    if (!(dt > 0.0)) throw ValidationError("integrate_trajectory: dt must be > 0");
    if (log_density_ratio(model, x0, t0) < std::log(model.rho_min))
        throw NodeError("initial point below node threshold");

    const auto n_steps = static_cast<std::size_t>(
        std::max<long long>(1, std::llround((t1 - t0) / dt)));
    const double h = (t1 - t0) / static_cast<double>(n_steps);

    Trajectory traj;
    traj.times.reserve(n_steps + 1);
    traj.positions.reserve(n_steps + 1);
    traj.times.push_back(t0);
    traj.positions.push_back(x0);

    double x = x0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const double t = t0 + static_cast<double>(i) * h;
        bool advanced = false;
        for (int halving = 0; halving <= kMaxHalvings; ++halving) {
            const int sub = 1 << halving;
            const double hs = h / sub;
            double xs = x;
            try {
                for (int s = 0; s < sub; ++s)
                    xs = rk4_step(model, xs, t + s * hs, hs);
            } catch (const NodeError&) {
                continue;  // retry the whole interval with smaller substeps
            }
            x = xs;
            advanced = true;
            break;
        }
        if (!advanced) {
            traj.status = TrajectoryStatus::aborted_at_node;
            return traj;
        }
        traj.times.push_back(t0 + static_cast<double>(i + 1) * h);
        traj.positions.push_back(x);
    }
    return traj;
}

TrajectoryEnsemble integrate_ensemble(const WaveModel& model, std::size_t n,
                                      double t0, double t1, double dt,
                                      std::uint64_t seed) {
    TrajectoryEnsemble ens;
    ens.model = model;
    ens.seed = seed;
    ens.t_final = t1;
    const std::vector<double> starts = sample_initial_positions(model, n, t0, seed);
    ens.trajectories.reserve(n);
    for (double x0 : starts)
        ens.trajectories.push_back(integrate_trajectory(model, x0, t0, t1, dt));
    return ens;
}

CrossingReport crossing_report(const TrajectoryEnsemble& ensemble) {
    CrossingReport rep;
    const auto& trajs = ensemble.trajectories;
    if (trajs.size() < 2) return rep;

    double min_gap = std::numeric_limits<double>::infinity();
    bool any_pair = false;
    for (std::size_t i = 0; i + 1 < trajs.size(); ++i) {
        const auto& a = trajs[i];
        const auto& b = trajs[i + 1];
        const std::size_t common = std::min(a.positions.size(), b.positions.size());
        for (std::size_t k = 0; k < common; ++k) {
            const double gap = b.positions[k] - a.positions[k];
            if (gap <= 0.0) ++rep.violations;
            min_gap = std::min(min_gap, gap);
            any_pair = true;
        }
    }
    if (any_pair) rep.min_gap = min_gap;
    return rep;
}

}  // namespace qtraj
