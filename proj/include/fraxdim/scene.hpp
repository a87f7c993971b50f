#pragma once

#include <fraxdim/ftc.hpp>
#include <fraxdim/irs.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace fraxdim {

struct SolverSettings {
    double tol = 1e-9;
    int association_q = 3;
    int max_levels = 8;
    std::size_t max_boxes = 2000000;
    std::size_t vertex_cap = 4000000;
    bool require_pisot = true;
};

struct RenderSettings {
    int width = 512;
    int height = 0;  // 0: derived from the chart aspect ratio
    int depth = 6;
    std::size_t path_cap = 10000000;
};

struct SceneConfig {
    std::string name;
    std::string origin;
    PisotField field = PisotField::two();
    ChartSpace space;
    std::optional<IrsSpec> irs;
    std::optional<Gifs> gifs;
    SolverSettings solver;
    RenderSettings render;
};

SceneConfig parse_scene(const std::string& text, const std::string& origin = "<string>");
SceneConfig load_scene(const std::string& path);

struct StageRecord {
    std::string name;
    std::string status;  // "pass", "fail" or "skipped"
    double seconds = 0;
    nlohmann::ordered_json detail;
};

struct PipelineReport {
    std::vector<StageRecord> stages;
    std::optional<Gifs> gifs;
    std::optional<ReducedGraphReport> ftc;
    std::optional<RatioMatrix> matrix;
    std::optional<DimensionResult> dimension;
    std::string method;  // "gosc" or "ftc"
    int exit_code = 0;   // 0 ok, 2 validation failure, 3 inconclusive, 4 solver failure
    std::string failure;
};

PipelineReport run_pipeline(const SceneConfig& cfg);
// Timing is left out when with_timing is false, which makes the output byte-stable.
nlohmann::ordered_json report_json(const SceneConfig& cfg, const PipelineReport& rep, bool with_timing = true);

nlohmann::ordered_json gifs_json(const Gifs& g);
nlohmann::ordered_json matrix_json(const RatioMatrix& m);
nlohmann::ordered_json ftc_json(const ReducedGraphReport& r);
// One row per line, e.g. "(beta^-a) x [0 1 1]" when every term carries the same exponent.
std::string matrix_text(const RatioMatrix& m);

}  // namespace fraxdim
