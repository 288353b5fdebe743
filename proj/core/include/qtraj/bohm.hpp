#ifndef QTRAJ_BOHM_HPP
#define QTRAJ_BOHM_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qtraj/wave_model.hpp"

namespace qtraj {

enum class TrajectoryStatus { completed, aborted_at_node };

const char* to_string(TrajectoryStatus s);

/// One guidance-equation trajectory sampled on a uniform time grid.
/// Near-node step halving happens inside a grid interval, so the recorded
/// times stay uniform across the ensemble.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> positions;
    TrajectoryStatus status = TrajectoryStatus::completed;

    double final_position() const { return positions.back(); }
};

struct TrajectoryEnsemble {
    std::vector<Trajectory> trajectories;
    WaveModel model;
    std::uint64_t seed = 0;
    double t_final = 0.0;

    std::size_t aborted_count() const;
};

/// Ordering diagnostics over all common time steps (adjacent start-order pairs).
struct CrossingReport {
    std::size_t violations = 0;
    std::optional<double> min_gap;  // absent for ensembles of < 2 trajectories
};

/// n positions drawn from |psi(x, t0)|^2 by inverse CDF on a tabulated grid
/// (2^14 points spanning the packet centers +- 8 sigma_t). Sorted ascending;
/// deterministic given seed. Throws GridError if the tabulated density fails
/// to normalize to 1 within 1e-6.
std::vector<double> sample_initial_positions(const WaveModel& model, std::size_t n,
                                             double t0, std::uint64_t seed);

/// Same, with an explicit tabulation window (exposed for tests).
std::vector<double> sample_initial_positions_in(const WaveModel& model, std::size_t n,
                                                double t0, std::uint64_t seed,
                                                double lo, double hi);

/// Fixed-step RK4 on dx/dt = p_bohm(x, t) / m from (x0, t0) to t1. When a
/// stage lands below the node threshold the interval is retried with halved
/// substeps (up to 8 halvings); if that fails the trajectory is returned with
/// aborted_at_node status, truncated at the last good grid time. NodeError is
/// thrown only when the initial point itself is below threshold.
Trajectory integrate_trajectory(const WaveModel& model, double x0, double t0,
                                double t1, double dt);

/// Born-rule sampling composed with per-trajectory integration.
TrajectoryEnsemble integrate_ensemble(const WaveModel& model, std::size_t n,
                                      double t0, double t1, double dt,
                                      std::uint64_t seed);

/// Counts order violations x_i >= x_j (i < j at t0) over all common steps.
/// Expected 0: the guidance velocity field is single valued.
CrossingReport crossing_report(const TrajectoryEnsemble& ensemble);

}  // namespace qtraj

#endif
