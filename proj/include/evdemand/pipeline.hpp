#pragma once

#include "evdemand/behavior.hpp"
#include "evdemand/config.hpp"
#include "evdemand/demand.hpp"
#include "evdemand/eval.hpp"
#include "evdemand/synth.hpp"
#include "evdemand/trips.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace evdemand {

// Stage names accepted by PipelineRunner::run, in dependency order.
const std::vector<std::string>& pipeline_stages();

// Orchestrates the full chain: raw records (from the configured CSVs or the
// synthetic fallback when no paths are set) through trips, cohort behavior,
// labeling, dataset assembly, sweeps, evaluation, and demand synthesis.
// Intermediates are computed lazily and cached; every artifact is a pure
// function of the config, so reruns are byte-identical.
class PipelineRunner {
public:
    explicit PipelineRunner(PipelineConfig cfg);

    // Runs one stage, writing its artifacts under out_dir; "report" runs
    // everything and adds a manifest with a content hash per artifact.
    // Returns the artifact names written by this call.
    std::vector<std::string> run(const std::string& stage);

    const PipelineConfig& config() const { return cfg_; }

    // Computed views, exposed for tests and bindings.
    bool synthetic_source();
    const ZoneGrid& grid();
    const std::vector<Trip>& ev_trips();
    const std::vector<Trip>& icev_trips();
    const std::vector<LabeledTrip>& labeled();
    const SplitDataset& split();
    const Evaluation& evaluation();

private:
    struct Source {
        std::vector<RawRecord> ev_records;
        std::vector<RawRecord> icev_records;
        std::vector<VehicleInfo> vehicles;
        std::size_t dynamic_rows = 0;
        std::size_t dropped_unknown_vehicle = 0;
        std::vector<std::string> static_rejects;
        bool synthetic = false;
    };

    const Source& source();
    void write_artifact(const std::string& name, std::string content);

    void stage_synth();
    void stage_ingest();
    void stage_trips();
    void stage_behavior();
    void stage_label();
    void stage_dataset();
    void stage_sweep();
    void stage_evaluate();
    void stage_demand();
    void stage_report();

    PipelineConfig cfg_;
    std::optional<Source> source_;
    std::optional<SynthResult> synth_;
    std::optional<TripBuildResult> ev_trips_;
    std::optional<TripBuildResult> icev_trips_;
    std::optional<std::pair<ZoneGrid, std::string>> grid_; // grid + provenance
    std::optional<LabelResult> labeled_;
    std::optional<SplitDataset> split_;
    std::optional<Evaluation> evaluation_;

    std::map<std::string, std::string> written_; // artifact name -> content
    std::vector<std::string> run_files_;
};

} // namespace evdemand
