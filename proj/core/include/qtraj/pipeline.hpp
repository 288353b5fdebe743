#ifndef QTRAJ_PIPELINE_HPP
#define QTRAJ_PIPELINE_HPP

#include <map>
#include <string>
#include <vector>

#include "qtraj/config.hpp"

namespace qtraj {

struct StageResult {
    Stage stage;
    std::string status;  // "ok" or "aborted: <reason>"
    std::string file;    // output CSV, empty if none written
    double seconds = 0.0;

    bool ok() const { return status == "ok"; }
};

/// Everything needed to reproduce a run byte-exactly, plus summary metrics.
/// Serialized as manifest.json (wall times vary run to run; the CSVs do not).
struct RunManifest {
    std::string version;
    std::uint64_t seed = 0;
    std::string scenario;
    std::string config_text;  // fully resolved config echo
    std::vector<StageResult> stages;
    std::map<std::string, double> metrics;

    bool all_ok() const;
};

/// Executes the requested stages in canonical order, writing one CSV per
/// stage into cfg.out_dir plus manifest.json. Stages recompute unwritten
/// upstream inputs in memory from the same substream seeds, so any stage
/// subset is reproducible on its own. A failing stage is recorded as aborted
/// and later stages still run; earlier outputs are retained.
RunManifest run_pipeline(const RunConfig& cfg);

/// Manifest serialization (also written by run_pipeline).
std::string manifest_to_json(const RunManifest& manifest);

}  // namespace qtraj

#endif
