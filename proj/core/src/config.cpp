#include "qtraj/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qtraj/errors.hpp"
#include "qtraj/weak_measurement.hpp"

namespace qtraj {

const char* to_string(Stage s) {
    switch (s) {
        case Stage::fields: return "fields";
        case Stage::trajectories: return "trajectories";
        case Stage::weak_scan: return "weak-scan";
        case Stage::reconstruct: return "reconstruct";
        case Stage::compare: return "compare";
        case Stage::field_mode: return "field-mode";
    }
    return "?";
}

std::optional<Stage> stage_from_string(const std::string& name) {
    for (Stage s : {Stage::fields, Stage::trajectories, Stage::weak_scan,
                    Stage::reconstruct, Stage::compare, Stage::field_mode}) {
        if (name == to_string(s)) return s;
    }
    return std::nullopt;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ParseError("invalid number for '" + key + "': " + v, line);
    }
}

std::uint64_t parse_uint(const std::string& v, const std::string& key, int line) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ParseError("invalid count for '" + key + "': " + v, line);
    return out;
}

bool parse_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ParseError("invalid bool for '" + key + "' (use true/false): " + v, line);
}

std::vector<Stage> parse_stages(const std::string& v, int line) {
    std::vector<Stage> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto s = stage_from_string(item);
        if (!s) throw ParseError("unknown stage '" + item + "'", line);
        out.push_back(*s);
    }
    if (out.empty()) throw ParseError("empty stage list", line);
    return out;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Single assignment point shared by the parser and --set overrides.
void set_key(RunConfig& c, const std::string& key, const std::string& value, int line) {
    using Setter = std::function<void(RunConfig&, const std::string&, int)>;
    static const std::map<std::string, Setter> setters = {
        {"scenario", [](RunConfig& c, const std::string& v, int) { c.scenario = v; }},
        {"mass", [](RunConfig& c, const std::string& v, int l) { c.mass = parse_double(v, "mass", l); }},
        {"sigma0", [](RunConfig& c, const std::string& v, int l) { c.sigma0 = parse_double(v, "sigma0", l); }},
        {"slit_x1", [](RunConfig& c, const std::string& v, int l) { c.slit_x1 = parse_double(v, "slit_x1", l); }},
        {"slit_x2", [](RunConfig& c, const std::string& v, int l) { c.slit_x2 = parse_double(v, "slit_x2", l); }},
        {"tilt_k1", [](RunConfig& c, const std::string& v, int l) { c.tilt_k1 = parse_double(v, "tilt_k1", l); }},
        {"tilt_k2", [](RunConfig& c, const std::string& v, int l) { c.tilt_k2 = parse_double(v, "tilt_k2", l); }},
        {"rel_phase", [](RunConfig& c, const std::string& v, int l) { c.rel_phase = parse_double(v, "rel_phase", l); }},
        {"v0", [](RunConfig& c, const std::string& v, int l) { c.v0 = parse_double(v, "v0", l); }},
        {"gauge_phase", [](RunConfig& c, const std::string& v, int l) { c.gauge_phase = parse_bool(v, "gauge_phase", l); }},
        {"p_y", [](RunConfig& c, const std::string& v, int l) { c.p_y = parse_double(v, "p_y", l); }},
        {"rho_min", [](RunConfig& c, const std::string& v, int l) { c.rho_min = parse_double(v, "rho_min", l); }},
        {"t_start", [](RunConfig& c, const std::string& v, int l) { c.t_start = parse_double(v, "t_start", l); }},
        {"t_end", [](RunConfig& c, const std::string& v, int l) { c.t_end = parse_double(v, "t_end", l); }},
        {"planes", [](RunConfig& c, const std::string& v, int l) { c.planes = parse_uint(v, "planes", l); }},
        {"bins", [](RunConfig& c, const std::string& v, int l) { c.bins = parse_uint(v, "bins", l); }},
        {"x_min", [](RunConfig& c, const std::string& v, int l) { c.x_min = parse_double(v, "x_min", l); }},
        {"x_max", [](RunConfig& c, const std::string& v, int l) { c.x_max = parse_double(v, "x_max", l); }},
        {"eta", [](RunConfig& c, const std::string& v, int l) { c.eta_direct = parse_double(v, "eta", l); }},
        {"coupling_d", [](RunConfig& c, const std::string& v, int l) { c.coupling_d = parse_double(v, "coupling_d", l); }},
        {"coupling_dt", [](RunConfig& c, const std::string& v, int l) { c.coupling_dt = parse_double(v, "coupling_dt", l); }},
        {"n_total", [](RunConfig& c, const std::string& v, int l) { c.n_total = parse_uint(v, "n_total", l); }},
        {"noiseless", [](RunConfig& c, const std::string& v, int l) { c.noiseless = parse_bool(v, "noiseless", l); }},
        {"ensemble_n", [](RunConfig& c, const std::string& v, int l) { c.ensemble_n = parse_uint(v, "ensemble_n", l); }},
        {"traj_dt", [](RunConfig& c, const std::string& v, int l) { c.traj_dt = parse_double(v, "traj_dt", l); }},
        {"recon_starts", [](RunConfig& c, const std::string& v, int l) { c.recon_starts = parse_uint(v, "recon_starts", l); }},
        {"recon_start_plane", [](RunConfig& c, const std::string& v, int l) { c.recon_start_plane = parse_uint(v, "recon_start_plane", l); }},
        {"exact_dt", [](RunConfig& c, const std::string& v, int l) { c.exact_dt = parse_double(v, "exact_dt", l); }},
        {"mode_k", [](RunConfig& c, const std::string& v, int l) { c.mode_k = parse_double(v, "mode_k", l); }},
        {"mode_c", [](RunConfig& c, const std::string& v, int l) { c.mode_c = parse_double(v, "mode_c", l); }},
        {"mode_alpha_re", [](RunConfig& c, const std::string& v, int l) { c.mode_alpha_re = parse_double(v, "mode_alpha_re", l); }},
        {"mode_alpha_im", [](RunConfig& c, const std::string& v, int l) { c.mode_alpha_im = parse_double(v, "mode_alpha_im", l); }},
        {"mode_beta_re", [](RunConfig& c, const std::string& v, int l) { c.mode_beta_re = parse_double(v, "mode_beta_re", l); }},
        {"mode_beta_im", [](RunConfig& c, const std::string& v, int l) { c.mode_beta_im = parse_double(v, "mode_beta_im", l); }},
        {"mode_q0_re", [](RunConfig& c, const std::string& v, int l) { c.mode_q0_re = parse_double(v, "mode_q0_re", l); }},
        {"mode_q0_im", [](RunConfig& c, const std::string& v, int l) { c.mode_q0_im = parse_double(v, "mode_q0_im", l); }},
        {"mode_t_end", [](RunConfig& c, const std::string& v, int l) { c.mode_t_end = parse_double(v, "mode_t_end", l); }},
        {"mode_dt", [](RunConfig& c, const std::string& v, int l) { c.mode_dt = parse_double(v, "mode_dt", l); }},
        {"seed", [](RunConfig& c, const std::string& v, int l) { c.seed = parse_uint(v, "seed", l); }},
        {"out_dir", [](RunConfig& c, const std::string& v, int) { c.out_dir = v; }},
        {"stages", [](RunConfig& c, const std::string& v, int l) { c.stages = parse_stages(v, l); }},
    };
    const auto it = setters.find(key);
    if (it == setters.end())
        throw UnknownKeyError("unknown config key '" + key + "' (line " +
                              std::to_string(line) + ")");
    it->second(c, value, line);
}

}  // namespace

double RunConfig::eta() const {
    if (coupling_d && coupling_dt) return coupling_eta(*coupling_d, *coupling_dt);
    if (eta_direct) return *eta_direct;
    return 0.05;
}

WaveModel RunConfig::wave_model() const {
    WaveModel m;
    m.mass = mass;
    m.sigma0 = sigma0;
    m.slit_x1 = slit_x1;
    m.slit_x2 = slit_x2;
    m.tilt_k1 = tilt_k1;
    m.tilt_k2 = tilt_k2;
    m.rel_phase = rel_phase;
    m.v0 = v0;
    m.gauge_phase = gauge_phase;
    m.p_y = p_y;
    m.rho_min = rho_min;
    return m;
}

GridSpec RunConfig::grid_spec() const {
    GridSpec g;
    g.planes = planes;
    g.t_start = t_start;
    g.t_end = t_end;
    g.bins = bins;
    g.x_min = x_min;
    g.x_max = x_max;
    return g;
}

MeasurementConfig RunConfig::measurement() const {
    MeasurementConfig m;
    m.eta = eta();
    m.n_total = n_total;
    m.noiseless = noiseless;
    return m;
}

ModeState RunConfig::mode_state() const {
    ModeState s;
    s.k = mode_k;
    s.c = mode_c;
    s.alpha = {mode_alpha_re, mode_alpha_im};
    s.beta = {mode_beta_re, mode_beta_im};
    s.normalize();
    return s;
}

void RunConfig::validate() const {
    if (eta_direct && (coupling_d || coupling_dt))
        throw ConflictError("give either eta or coupling_d + coupling_dt, not both");
    if (static_cast<bool>(coupling_d) != static_cast<bool>(coupling_dt))
        throw ConflictError("coupling_d and coupling_dt must be given together");
    wave_model().validate();
    grid_spec().validate();
    measurement().validate();
    if (!(traj_dt > 0.0) || !(exact_dt > 0.0) || !(mode_dt > 0.0))
        throw ValidationError("time steps must be > 0");
    if (recon_start_plane >= planes)
        throw ValidationError("recon_start_plane beyond the grid");
    ModeState ms = mode_state();
    ms.validate();
}

RunConfig load_config(std::istream& in) {
    RunConfig cfg;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);
        set_key(cfg, key, value, line_no);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config_text(const std::string& text) {
    std::istringstream in(text);
    return load_config(in);
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    return load_config(in);
}

void apply_override(RunConfig& cfg, const std::string& key_value) {
    const auto eq = key_value.find('=');
    if (eq == std::string::npos)
        throw ParseError("override must be key=value: " + key_value, 0);
    const std::string key = trim(key_value.substr(0, eq));
    const std::string value = trim(key_value.substr(eq + 1));
    set_key(cfg, key, value, 0);
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "scenario = " << c.scenario << "\n";
    out << "mass = " << fmt17(c.mass) << "\n";
    out << "sigma0 = " << fmt17(c.sigma0) << "\n";
    out << "slit_x1 = " << fmt17(c.slit_x1) << "\n";
    out << "slit_x2 = " << fmt17(c.slit_x2) << "\n";
    out << "tilt_k1 = " << fmt17(c.tilt_k1) << "\n";
    out << "tilt_k2 = " << fmt17(c.tilt_k2) << "\n";
    out << "rel_phase = " << fmt17(c.rel_phase) << "\n";
    out << "v0 = " << fmt17(c.v0) << "\n";
    out << "gauge_phase = " << (c.gauge_phase ? "true" : "false") << "\n";
    out << "p_y = " << fmt17(c.p_y) << "\n";
    out << "rho_min = " << fmt17(c.rho_min) << "\n";
    out << "t_start = " << fmt17(c.t_start) << "\n";
    out << "t_end = " << fmt17(c.t_end) << "\n";
    out << "planes = " << c.planes << "\n";
    out << "bins = " << c.bins << "\n";
    out << "x_min = " << fmt17(c.x_min) << "\n";
    out << "x_max = " << fmt17(c.x_max) << "\n";
    if (c.coupling_d && c.coupling_dt) {
        out << "coupling_d = " << fmt17(*c.coupling_d) << "\n";
        out << "coupling_dt = " << fmt17(*c.coupling_dt) << "\n";
    } else if (c.eta_direct) {
        out << "eta = " << fmt17(*c.eta_direct) << "\n";
    }
    out << "n_total = " << c.n_total << "\n";
    out << "noiseless = " << (c.noiseless ? "true" : "false") << "\n";
    out << "ensemble_n = " << c.ensemble_n << "\n";
    out << "traj_dt = " << fmt17(c.traj_dt) << "\n";
    out << "recon_starts = " << c.recon_starts << "\n";
    out << "recon_start_plane = " << c.recon_start_plane << "\n";
    out << "exact_dt = " << fmt17(c.exact_dt) << "\n";
    out << "mode_k = " << fmt17(c.mode_k) << "\n";
    out << "mode_c = " << fmt17(c.mode_c) << "\n";
    out << "mode_alpha_re = " << fmt17(c.mode_alpha_re) << "\n";
    out << "mode_alpha_im = " << fmt17(c.mode_alpha_im) << "\n";
    out << "mode_beta_re = " << fmt17(c.mode_beta_re) << "\n";
    out << "mode_beta_im = " << fmt17(c.mode_beta_im) << "\n";
    out << "mode_q0_re = " << fmt17(c.mode_q0_re) << "\n";
    out << "mode_q0_im = " << fmt17(c.mode_q0_im) << "\n";
    out << "mode_t_end = " << fmt17(c.mode_t_end) << "\n";
    out << "mode_dt = " << fmt17(c.mode_dt) << "\n";
    out << "seed = " << c.seed << "\n";
    out << "out_dir = " << c.out_dir << "\n";
    out << "stages = ";
    for (std::size_t i = 0; i < c.stages.size(); ++i) {
        if (i) out << ",";
        out << to_string(c.stages[i]);
    }
    out << "\n";
    return out.str();
}

}  // namespace qtraj
