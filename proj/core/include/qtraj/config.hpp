#ifndef QTRAJ_CONFIG_HPP
#define QTRAJ_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qtraj/field_mode.hpp"
#include "qtraj/reconstruction.hpp"
#include "qtraj/wave_model.hpp"

namespace qtraj {

enum class Stage { fields, trajectories, weak_scan, reconstruct, compare, field_mode };

const char* to_string(Stage s);
std::optional<Stage> stage_from_string(const std::string& name);

/// Fully resolved run parameters. Parsed from flat `key = value` text
/// (one pair per line, `#` comments); every key has a documented default and
/// unknown keys are errors. eta is given either directly or as
/// coupling_d * coupling_dt, never both.
struct RunConfig {
    std::string scenario = "two_slit";

    // wave model
    double mass = 1.0;
    double sigma0 = 1.0;
    double slit_x1 = -2.5;
    double slit_x2 = 2.5;
    double tilt_k1 = 0.0;
    double tilt_k2 = 0.0;
    double rel_phase = 0.0;
    double v0 = 0.0;
    bool gauge_phase = true;
    double p_y = 10.0;
    double rho_min = 1e-12;

    // scan grid
    double t_start = 0.0;
    double t_end = 4.0;
    std::uint64_t planes = 50;
    std::uint64_t bins = 400;
    double x_min = -24.0;
    double x_max = 24.0;

    // measurement
    std::optional<double> eta_direct;       // `eta` key
    std::optional<double> coupling_d;       // `coupling_d` key
    std::optional<double> coupling_dt;      // `coupling_dt` key
    std::uint64_t n_total = 1000000;
    bool noiseless = true;

    // trajectory ensemble
    std::uint64_t ensemble_n = 5000;
    double traj_dt = 0.005;

    // reconstruction / comparison
    std::uint64_t recon_starts = 100;
    std::uint64_t recon_start_plane = 0;
    double exact_dt = 0.002;

    // single field mode demo
    double mode_k = 1.0;
    double mode_c = 1.0;
    double mode_alpha_re = 0.7071067811865476;
    double mode_alpha_im = 0.0;
    double mode_beta_re = 0.7071067811865476;
    double mode_beta_im = 0.0;
    double mode_q0_re = 1.0;
    double mode_q0_im = 0.0;
    double mode_t_end = 12.0;
    double mode_dt = 0.005;

    std::uint64_t seed = 12345;
    std::string out_dir = "out";
    std::vector<Stage> stages = {Stage::fields,      Stage::trajectories,
                                 Stage::weak_scan,   Stage::reconstruct,
                                 Stage::compare,     Stage::field_mode};

    /// Resolved coupling strength (default 0.05 when nothing is given).
    double eta() const;

    WaveModel wave_model() const;
    GridSpec grid_spec() const;
    MeasurementConfig measurement() const;
    ModeState mode_state() const;
    Complex mode_q0() const { return {mode_q0_re, mode_q0_im}; }

    /// Semantic checks beyond per-key parsing (eta conflict, ranges).
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

/// Parse config text. Throws ParseError (with line number), UnknownKeyError,
/// or ConflictError.
RunConfig load_config(std::istream& in);
RunConfig load_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Apply one `key=value` override (the CLI --set flag).
void apply_override(RunConfig& cfg, const std::string& key_value);

/// Round-trippable flat text: load(serialize(cfg)) == cfg.
std::string serialize_config(const RunConfig& cfg);

}  // namespace qtraj

#endif
