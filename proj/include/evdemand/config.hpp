#pragma once

#include "evdemand/behavior.hpp"
#include "evdemand/charging.hpp"
#include "evdemand/eval.hpp"
#include "evdemand/geo.hpp"
#include "evdemand/ingest.hpp"
#include "evdemand/synth.hpp"

#include <optional>
#include <string>

namespace evdemand {

// Every pipeline knob in one versioned, human-editable JSON tree. CLI flags
// override individual fields one-for-one.
struct PipelineConfig {
    // paths; empty CSV paths select the synthetic fallback source
    std::string static_csv;
    std::string dynamic_csv;
    std::string out_dir = "out";

    DynamicSchema dyn_schema;
    StaticSchema static_schema;

    int zone_rows = 3;
    int zone_cols = 3;
    std::optional<BoundingBox> bbox; // absent = derive from the data source

    ChargerParams charger;

    double test_frac = 0.25;
    std::uint64_t seed = 7;
    bool stratify = false;
    std::optional<double> validation_frac;

    SweepGrids grids;
    int n_trees = 100;
    int min_leaf = 1;
    int mtry = 0; // 0 = auto

    int demand_case = 0; // 1, 2, or 0 for both
    bool grid_side = false;
    bool impulse = false;

    BehaviorBins bins;
    SynthConfig synth;
};

// Environment variable consulted for the config path when --config is absent.
inline constexpr const char* kConfigEnvVar = "EVDEMAND_CONFIG";

void validate(const PipelineConfig& cfg);

// Strict parser: unknown keys are config errors. Missing keys keep defaults.
PipelineConfig config_from_json(const std::string& text);
std::string config_to_json(const PipelineConfig& cfg);
PipelineConfig load_config_file(const std::string& path);

} // namespace evdemand
