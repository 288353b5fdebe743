#ifndef QTRAJ_RECONSTRUCTION_HPP
#define QTRAJ_RECONSTRUCTION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qtraj/bohm.hpp"
#include "qtraj/wave_model.hpp"

namespace qtraj {

/// Rectangular scan layout: `planes` readout planes at uniformly spaced times
/// in [t_start, t_end], `bins` transverse bin centers in [x_min, x_max].
struct GridSpec {
    std::size_t planes = 50;
    double t_start = 0.0;
    double t_end = 4.0;
    std::size_t bins = 400;
    double x_min = -24.0;
    double x_max = 24.0;

    void validate() const;
    double plane_time(std::size_t k) const;
    double bin_center(std::size_t j) const;
    double bin_spacing() const;
};

struct MeasurementConfig {
    double eta = 0.05;
    std::uint64_t n_total = 1000000;
    bool noiseless = true;

    void validate() const;
};

struct WeakScanCell {
    Complex w_true;        // exact weak momentum at the cell
    double p_right = 0.0;  // readout probability
    std::uint64_t n_right = 0;
    std::uint64_t n_left = 0;
    double w_est = 0.0;  // extracted Re <P>_W estimate
    bool missing = false;  // density below node threshold; never silently zero
    std::uint64_t seed = 0;  // per-cell RNG substream seed
};

/// Measured transverse weak-momentum field over the scan grid.
struct WeakScanGrid {
    GridSpec spec;
    MeasurementConfig meas;
    WaveModel model;
    std::uint64_t master_seed = 0;
    std::string id;
    std::vector<double> plane_times;  // strictly increasing
    std::vector<double> plane_ys;     // y_k = (p_y/m) t_k
    std::vector<WeakScanCell> cells;  // row-major [k * bins + j]

    const WeakScanCell& cell(std::size_t j, std::size_t k) const;
    WeakScanCell& cell(std::size_t j, std::size_t k);
    std::size_t missing_count() const;
};

/// Flow line stepped plane to plane through the measured momentum field.
struct ReconstructedTrajectory {
    std::size_t start_plane = 0;
    std::vector<double> positions;  // one per plane from start_plane on
    bool terminated = false;        // stopped at a nodal gap or grid edge
    std::string grid_id;
    std::string method;  // interpolation/stepping provenance
};

/// Per-trajectory and ensemble agreement metrics.
struct TrajectoryComparison {
    struct PerTrajectory {
        double rms = 0.0;
        double max_dev = 0.0;
        std::size_t planes_used = 0;
    };
    std::vector<PerTrajectory> per_trajectory;
    double mean_rms = 0.0;
    double worst_rms = 0.0;
    double fraction_terminated = 0.0;
};

/// Simulates the full protocol at every cell: exact weak momentum, pointer
/// coupling, circular readout probabilities, (optionally) binomial counts,
/// arcsin extraction. Cells below the node threshold are marked missing.
WeakScanGrid run_weak_scan(const WaveModel& model, const GridSpec& spec,
                           const MeasurementConfig& meas, std::uint64_t seed);

/// Measured momentum at transverse position x on plane k; linear between the
/// two bracketing bin centers. One missing bracket degrades to the other's
/// value; both missing raises GapError; x outside the bin-center span raises
/// OutOfRangeError.
double interpolate_w(const WeakScanGrid& grid, double x, std::size_t k);

/// Explicit first-order stepping x_{k+1} = x_k + (w/p_y) (y_{k+1} - y_k),
/// one flow line per start. A GapError or grid exit terminates that line and
/// is recorded; it never fails the whole reconstruction.
std::vector<ReconstructedTrajectory> reconstruct_trajectories(
    const WeakScanGrid& grid, const std::vector<double>& starts,
    std::size_t start_plane = 0);

/// RMS / max transverse deviation per flow line against ground-truth
/// trajectories sampled at the scan plane times. Throws MismatchError if the
/// sets do not pair up.
TrajectoryComparison compare_trajectories(
    const std::vector<ReconstructedTrajectory>& reconstructed,
    const WeakScanGrid& grid, const TrajectoryEnsemble& exact);

}  // namespace qtraj

#endif
