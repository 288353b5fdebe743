#include "qtraj/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qtraj/errors.hpp"
#include "qtraj/rng.hpp"
#include "qtraj/weak_measurement.hpp"

namespace qtraj {

void GridSpec::validate() const {
    if (planes < 2) throw ValidationError("grid needs at least 2 planes");
    if (bins < 2) throw ValidationError("grid needs at least 2 bins");
    if (!(t_end > t_start)) throw ValidationError("grid t_end must be > t_start");
    if (!(x_max > x_min)) throw ValidationError("grid x_max must be > x_min");
}

double GridSpec::plane_time(std::size_t k) const {
    return t_start + (t_end - t_start) * static_cast<double>(k) /
                         static_cast<double>(planes - 1);
}

double GridSpec::bin_center(std::size_t j) const {
    return x_min + bin_spacing() * static_cast<double>(j);
}

double GridSpec::bin_spacing() const {
    return (x_max - x_min) / static_cast<double>(bins - 1);
}

void MeasurementConfig::validate() const {
    if (!(eta > 0.0)) throw ValidationError("eta must be > 0");
    if (!noiseless && n_total == 0)
        throw ValidationError("n_total must be > 0 for a counting scan");
}

const WeakScanCell& WeakScanGrid::cell(std::size_t j, std::size_t k) const {
    return cells[k * spec.bins + j];
}

WeakScanCell& WeakScanGrid::cell(std::size_t j, std::size_t k) {
    return cells[k * spec.bins + j];
}

std::size_t WeakScanGrid::missing_count() const {
    return static_cast<std::size_t>(std::count_if(
        cells.begin(), cells.end(), [](const WeakScanCell& c) { return c.missing; }));
}

WeakScanGrid run_weak_scan(const WaveModel& model, const GridSpec& spec,
                           const MeasurementConfig& meas, std::uint64_t seed) {
    model.validate();
    spec.validate();
    meas.validate();

    WeakScanGrid grid;
    grid.spec = spec;
    grid.meas = meas;
    grid.model = model;
    grid.master_seed = seed;
    {
        std::ostringstream id;
        id << "scan-" << std::hex << seed << std::dec << "-" << spec.planes << "x"
           << spec.bins;
        grid.id = id.str();
    }
    grid.plane_times.resize(spec.planes);
    grid.plane_ys.resize(spec.planes);
    for (std::size_t k = 0; k < spec.planes; ++k) {
        grid.plane_times[k] = spec.plane_time(k);
        grid.plane_ys[k] = model.y_of_t(grid.plane_times[k]);
    }

    const std::uint64_t scan_seed = derive_seed(seed, kStreamWeakScan);
    const CouplingConfig coupling = CouplingConfig::from_eta(meas.eta);
    grid.cells.resize(spec.planes * spec.bins);

    for (std::size_t k = 0; k < spec.planes; ++k) {
        const double t = grid.plane_times[k];
        for (std::size_t j = 0; j < spec.bins; ++j) {
            WeakScanCell& cell = grid.cell(j, k);
            cell.seed = derive_seed(scan_seed, k * spec.bins + j);
            try {
                cell.w_true = weak_momentum(model, spec.bin_center(j), t);
            } catch (const NodeError&) {
                cell.missing = true;
                continue;
            }
            const PointerState pointer = pointer_after_weak_coupling(coupling, cell.w_true);
            const auto [p_right, p_left] =
                readout_probabilities(pointer, ReadoutBasis::circular());
            cell.p_right = p_right;
            if (meas.noiseless) {
                cell.w_est = extract_weak_value_noiseless(p_right, meas.eta);
            } else {
                const CountRecord counts = sample_counts(p_right, meas.n_total, cell.seed);
                cell.n_right = counts.n_right;
                cell.n_left = counts.n_left;
                cell.w_est = extract_weak_value(counts, meas.eta);
            }
        }
    }
    return grid;
}

double interpolate_w(const WeakScanGrid& grid, double x, std::size_t k) {
    const GridSpec& spec = grid.spec;
    if (k >= spec.planes) throw OutOfRangeError("plane index out of range");
    const double dx = spec.bin_spacing();
    const double pos = (x - spec.x_min) / dx;
    // tolerate float fuzz at the span edges
    if (pos < -1e-9 || pos > static_cast<double>(spec.bins - 1) + 1e-9)
        throw OutOfRangeError("x outside the scan span");

    const auto jl = static_cast<std::size_t>(std::clamp(
        std::floor(pos), 0.0, static_cast<double>(spec.bins - 2)));
    const std::size_t jr = jl + 1;
    const WeakScanCell& cl = grid.cell(jl, k);
    const WeakScanCell& cr = grid.cell(jr, k);

    if (cl.missing && cr.missing)
        throw GapError("both bracketing cells missing (nodal gap)");
    if (cl.missing) return cr.w_est;
    if (cr.missing) return cl.w_est;
    const double f = std::clamp(pos - static_cast<double>(jl), 0.0, 1.0);
    return (1.0 - f) * cl.w_est + f * cr.w_est;
}

std::vector<ReconstructedTrajectory> reconstruct_trajectories(
    const WeakScanGrid& grid, const std::vector<double>& starts,
    std::size_t start_plane) {
    if (start_plane >= grid.spec.planes)
        throw ValidationError("start plane beyond the grid");

    std::vector<ReconstructedTrajectory> out;
    out.reserve(starts.size());
    for (double x0 : starts) {
        ReconstructedTrajectory traj;
        traj.start_plane = start_plane;
        traj.grid_id = grid.id;
        traj.method = "linear-x/nearest-earlier-plane/euler";
        traj.positions.push_back(x0);

        double x = x0;
        for (std::size_t k = start_plane; k + 1 < grid.spec.planes; ++k) {
            double w;
            try {
                w = interpolate_w(grid, x, k);
            } catch (const GapError&) {
                traj.terminated = true;
                break;
            } catch (const OutOfRangeError&) {
                traj.terminated = true;
                break;
            }
            const double dy = grid.plane_ys[k + 1] - grid.plane_ys[k];
            x += w / grid.model.p_y * dy;
            traj.positions.push_back(x);
        }
        out.push_back(std::move(traj));
    }
    return out;
}

TrajectoryComparison compare_trajectories(
    const std::vector<ReconstructedTrajectory>& reconstructed,
    const WeakScanGrid& grid, const TrajectoryEnsemble& exact) {
    if (reconstructed.size() != exact.trajectories.size())
        throw MismatchError("trajectory counts differ");

    TrajectoryComparison cmp;
    cmp.per_trajectory.reserve(reconstructed.size());

    double rms_sum = 0.0;
    std::size_t terminated = 0;
    for (std::size_t i = 0; i < reconstructed.size(); ++i) {
        const ReconstructedTrajectory& rec = reconstructed[i];
        const Trajectory& ref = exact.trajectories[i];

        TrajectoryComparison::PerTrajectory per;
        double sq_sum = 0.0;
        for (std::size_t p = 0; p < rec.positions.size(); ++p) {
            const std::size_t k = rec.start_plane + p;
            const double tk = grid.plane_times[k];
            // locate tk on the reference time grid
            const double t0 = ref.times.front();
            const double dt = ref.times.size() > 1 ? ref.times[1] - ref.times[0] : 1.0;
            const auto idx = static_cast<std::size_t>(std::llround((tk - t0) / dt));
            if (idx >= ref.times.size() || std::abs(ref.times[idx] - tk) > 1e-9)
                throw MismatchError("plane time not on the reference time grid");
            if (p == 0 && std::abs(rec.positions[0] - ref.positions[idx]) >
                              0.1 * (grid.spec.x_max - grid.spec.x_min))
                throw MismatchError("starting positions differ");
            const double dev = rec.positions[p] - ref.positions[idx];
            sq_sum += dev * dev;
            per.max_dev = std::max(per.max_dev, std::abs(dev));
            ++per.planes_used;
        }
        per.rms = per.planes_used > 0
                      ? std::sqrt(sq_sum / static_cast<double>(per.planes_used))
                      : 0.0;
        rms_sum += per.rms;
        cmp.worst_rms = std::max(cmp.worst_rms, per.rms);
        if (rec.terminated) ++terminated;
        cmp.per_trajectory.push_back(per);
    }
    if (!reconstructed.empty()) {
        cmp.mean_rms = rms_sum / static_cast<double>(reconstructed.size());
        cmp.fraction_terminated =
            static_cast<double>(terminated) / static_cast<double>(reconstructed.size());
    }
    return cmp;
}

}  // namespace qtraj
