#include "qtraj/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "qtraj/bohm.hpp"
#include "qtraj/csv.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/field_mode.hpp"
#include "qtraj/reconstruction.hpp"
#include "qtraj/rng.hpp"
#include "qtraj/version.hpp"
#include "qtraj/weak_measurement.hpp"

namespace qtraj {

namespace {

// Lazily computed intermediates shared between stages, so e.g. `compare`
// alone still sees exactly the grid that `weak-scan` would have written.
struct PipelineContext {
    const RunConfig& cfg;
    WaveModel model;
    std::optional<TrajectoryEnsemble> ensemble;
    std::optional<WeakScanGrid> grid;
    std::optional<std::vector<double>> starts;
    std::optional<std::vector<ReconstructedTrajectory>> recon;

    explicit PipelineContext(const RunConfig& c) : cfg(c), model(c.wave_model()) {}

    const TrajectoryEnsemble& get_ensemble() {
        if (!ensemble)
            ensemble = integrate_ensemble(model, cfg.ensemble_n, cfg.t_start, cfg.t_end,
                                          cfg.traj_dt,
                                          derive_seed(cfg.seed, kStreamTrajectories));
        return *ensemble;
    }

    const WeakScanGrid& get_grid() {
        if (!grid)
            grid = run_weak_scan(model, cfg.grid_spec(), cfg.measurement(), cfg.seed);
        return *grid;
    }

    const std::vector<double>& get_starts() {
        if (!starts) {
            const double t0 = cfg.grid_spec().plane_time(cfg.recon_start_plane);
            starts = sample_initial_positions(model, cfg.recon_starts, t0,
                                              derive_seed(cfg.seed, kStreamReconstruct));
        }
        return *starts;
    }

    const std::vector<ReconstructedTrajectory>& get_recon() {
        if (!recon)
            recon = reconstruct_trajectories(get_grid(), get_starts(),
                                             cfg.recon_start_plane);
        return *recon;
    }

    /// RK4 ground truth on the reconstruction starts, with the step snapped
    /// so trajectory times land exactly on the plane times.
    TrajectoryEnsemble exact_for_compare() {
        const GridSpec spec = cfg.grid_spec();
        const double t0 = spec.plane_time(cfg.recon_start_plane);
        const double plane_dt =
            (spec.t_end - spec.t_start) / static_cast<double>(spec.planes - 1);
        const auto sub = static_cast<std::size_t>(
            std::max(1.0, std::ceil(plane_dt / cfg.exact_dt - 1e-12)));
        const double dt = plane_dt / static_cast<double>(sub);

        TrajectoryEnsemble ens;
        ens.model = model;
        ens.seed = derive_seed(cfg.seed, kStreamReconstruct);
        ens.t_final = spec.t_end;
        for (double x0 : get_starts())
            ens.trajectories.push_back(
                integrate_trajectory(model, x0, t0, spec.t_end, dt));
        return ens;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string out_path(const RunConfig& cfg, const char* name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

std::string stage_fields(PipelineContext& ctx, const RunConfig& cfg) {
    const GridSpec spec = cfg.grid_spec();
    CsvWriter csv(out_path(cfg, "fields.csv"),
                  "qtraj fields schema v1; units hbar=1; rows below the node "
                  "threshold are omitted",
                  {"x", "t", "re_psi", "im_psi", "rho", "p_bohm", "p_osmotic",
                   "q_pot", "e_bohm", "hj_residual"});
    for (std::size_t k = 0; k < spec.planes; ++k) {
        const double t = spec.plane_time(k);
        for (std::size_t j = 0; j < spec.bins; ++j) {
            const double x = spec.bin_center(j);
            try {
                const FieldSample s = field_sample(ctx.model, x, t);
                csv.write_row({s.x, s.t, s.psi.real(), s.psi.imag(), s.rho, s.p_bohm,
                               s.p_osmotic, s.q_pot, s.e_bohm, s.hj_residual});
            } catch (const NodeError&) {
                // refused, not written
            }
        }
    }
    csv.close();
    return "fields.csv";
}

std::string stage_trajectories(PipelineContext& ctx, const RunConfig& cfg) {
    const TrajectoryEnsemble& ens = ctx.get_ensemble();
    CsvWriter csv(out_path(cfg, "trajectories.csv"),
                  "qtraj trajectories schema v1; units hbar=1",
                  {"traj_id", "t", "x", "status"});
    for (std::size_t i = 0; i < ens.trajectories.size(); ++i) {
        const Trajectory& traj = ens.trajectories[i];
        for (std::size_t p = 0; p < traj.positions.size(); ++p)
            csv.write_row({static_cast<std::uint64_t>(i), traj.times[p],
                           traj.positions[p], std::string(to_string(traj.status))});
    }
    csv.close();
    return "trajectories.csv";
}

std::string stage_weak_scan(PipelineContext& ctx, const RunConfig& cfg) {
    const WeakScanGrid& grid = ctx.get_grid();
    CsvWriter csv(out_path(cfg, "weak_scan.csv"),
                  "qtraj weak_scan schema v1; units hbar=1; missing_flag=1 marks "
                  "node-refused cells (value columns are placeholders there)",
                  {"plane_k", "t", "y", "bin_j", "x", "w_true_re", "w_true_im",
                   "p_right", "n_right", "n_left", "w_est", "missing_flag"});
    for (std::size_t k = 0; k < grid.spec.planes; ++k) {
        for (std::size_t j = 0; j < grid.spec.bins; ++j) {
            const WeakScanCell& cell = grid.cell(j, k);
            csv.write_row({static_cast<std::uint64_t>(k), grid.plane_times[k],
                           grid.plane_ys[k], static_cast<std::uint64_t>(j),
                           grid.spec.bin_center(j), cell.w_true.real(),
                           cell.w_true.imag(), cell.p_right, cell.n_right, cell.n_left,
                           cell.w_est, static_cast<std::uint64_t>(cell.missing ? 1 : 0)});
        }
    }
    csv.close();
    return "weak_scan.csv";
}

std::string stage_reconstruct(PipelineContext& ctx, const RunConfig& cfg) {
    const auto& recon = ctx.get_recon();
    const WeakScanGrid& grid = ctx.get_grid();
    CsvWriter csv(out_path(cfg, "reconstructed.csv"),
                  "qtraj reconstructed schema v1; units hbar=1",
                  {"traj_id", "plane_k", "y", "x", "terminated_flag"});
    for (std::size_t i = 0; i < recon.size(); ++i) {
        const ReconstructedTrajectory& traj = recon[i];
        for (std::size_t p = 0; p < traj.positions.size(); ++p) {
            const std::size_t k = traj.start_plane + p;
            csv.write_row({static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(k),
                           grid.plane_ys[k], traj.positions[p],
                           static_cast<std::uint64_t>(traj.terminated ? 1 : 0)});
        }
    }
    csv.close();
    return "reconstructed.csv";
}

std::string stage_compare(PipelineContext& ctx, const RunConfig& cfg,
                          RunManifest& manifest) {
    const TrajectoryEnsemble exact = ctx.exact_for_compare();
    const TrajectoryComparison cmp =
        compare_trajectories(ctx.get_recon(), ctx.get_grid(), exact);
    CsvWriter csv(out_path(cfg, "compare.csv"),
                  "qtraj compare schema v1; units hbar=1",
                  {"traj_id", "rms", "max_dev", "planes_used"});
    for (std::size_t i = 0; i < cmp.per_trajectory.size(); ++i) {
        const auto& per = cmp.per_trajectory[i];
        csv.write_row({static_cast<std::uint64_t>(i), per.rms, per.max_dev,
                       static_cast<std::uint64_t>(per.planes_used)});
    }
    csv.close();
    manifest.metrics["compare_mean_rms"] = cmp.mean_rms;
    manifest.metrics["compare_worst_rms"] = cmp.worst_rms;
    manifest.metrics["compare_fraction_terminated"] = cmp.fraction_terminated;
    return "compare.csv";
}

std::string stage_field_mode(PipelineContext& ctx, const RunConfig& cfg) {
    (void)ctx;
    const ModeState state = cfg.mode_state();
    const ModeBeablePath path =
        evolve_mode_beable(state, cfg.mode_q0(), 0.0, cfg.mode_t_end, cfg.mode_dt);
    CsvWriter csv(out_path(cfg, "mode_beable.csv"),
                  "qtraj mode_beable schema v1; units hbar=1",
                  {"t", "re_q", "im_q", "abs_q"});
    for (std::size_t i = 0; i < path.times.size(); ++i) {
        const Complex q = path.states[i].q;
        csv.write_row({path.times[i], q.real(), q.imag(), std::abs(q)});
    }
    csv.close();
    return "mode_beable.csv";
}

}  // namespace

bool RunManifest::all_ok() const {
    return std::all_of(stages.begin(), stages.end(),
                       [](const StageResult& s) { return s.ok(); });
}

RunManifest run_pipeline(const RunConfig& cfg) {
    cfg.validate();
    std::filesystem::create_directories(cfg.out_dir);

    RunManifest manifest;
    manifest.version = kVersion;
    manifest.seed = cfg.seed;
    manifest.scenario = cfg.scenario;
    manifest.config_text = serialize_config(cfg);

    PipelineContext ctx(cfg);

    // canonical order regardless of how the stage list was written
    std::vector<Stage> order = {Stage::fields,      Stage::trajectories,
                                Stage::weak_scan,   Stage::reconstruct,
                                Stage::compare,     Stage::field_mode};
    for (Stage stage : order) {
        if (std::find(cfg.stages.begin(), cfg.stages.end(), stage) == cfg.stages.end())
            continue;
        StageResult result;
        result.stage = stage;
        const auto t0 = Clock::now();
        try {
            switch (stage) {
                case Stage::fields: result.file = stage_fields(ctx, cfg); break;
                case Stage::trajectories:
                    result.file = stage_trajectories(ctx, cfg);
                    manifest.metrics["trajectories_aborted"] =
                        static_cast<double>(ctx.get_ensemble().aborted_count());
                    break;
                case Stage::weak_scan:
                    result.file = stage_weak_scan(ctx, cfg);
                    manifest.metrics["scan_missing_cells"] =
                        static_cast<double>(ctx.get_grid().missing_count());
                    break;
                case Stage::reconstruct: result.file = stage_reconstruct(ctx, cfg); break;
                case Stage::compare: result.file = stage_compare(ctx, cfg, manifest); break;
                case Stage::field_mode: result.file = stage_field_mode(ctx, cfg); break;
            }
            result.status = "ok";
        } catch (const Error& e) {
            result.status = std::string("aborted: ") + e.what();
        }
        result.seconds = seconds_since(t0);
        manifest.stages.push_back(result);
    }

    std::ofstream out(std::filesystem::path(cfg.out_dir) / "manifest.json");
    out << manifest_to_json(manifest) << "\n";
    return manifest;
}

std::string manifest_to_json(const RunManifest& m) {
    nlohmann::json j;
    j["version"] = m.version;
    j["seed"] = m.seed;
    j["scenario"] = m.scenario;
    j["config"] = m.config_text;
    for (const StageResult& s : m.stages) {
        const std::string name = to_string(s.stage);
        j[name + "_status"] = s.status;
        j[name + "_file"] = s.file;
        j[name + "_seconds"] = s.seconds;
    }
    for (const auto& [key, value] : m.metrics) j[key] = value;
    return j.dump(2);
}

}  // namespace qtraj
