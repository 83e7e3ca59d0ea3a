#include "evdemand/config.hpp"
#include "evdemand/errors.hpp"
#include "evdemand/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Overrides {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string zones;
    std::optional<int> demand_case;
    std::optional<double> validation_frac;
    bool grid_side = false;
    bool impulse = false;
    bool stratify = false;
};

std::pair<int, int> parse_zones(const std::string& s) {
    auto x = s.find('x');
    if (x == std::string::npos) x = s.find('X');
    if (x == std::string::npos || x == 0 || x + 1 >= s.size())
        throw evdemand::ConfigError("--zones expects ROWSxCOLS, e.g. 3x3; got '" + s + "'");
    try {
        std::size_t used = 0;
        int rows = std::stoi(s.substr(0, x), &used);
        if (used != x) throw std::invalid_argument(s);
        std::string right = s.substr(x + 1);
        int cols = std::stoi(right, &used);
        if (used != right.size()) throw std::invalid_argument(s);
        return {rows, cols};
    } catch (const std::logic_error&) {
        throw evdemand::ConfigError("--zones expects ROWSxCOLS, e.g. 3x3; got '" + s + "'");
    }
}

evdemand::PipelineConfig resolve_config(const Overrides& o) {
    evdemand::PipelineConfig cfg;
    std::string path = o.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv(evdemand::kConfigEnvVar)) path = env;
    }
    if (!path.empty()) cfg = evdemand::load_config_file(path);

    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (o.seed) {
        cfg.seed = *o.seed;
        cfg.synth.seed = *o.seed;
    }
    if (!o.zones.empty()) {
        auto [rows, cols] = parse_zones(o.zones);
        cfg.zone_rows = rows;
        cfg.zone_cols = cols;
        cfg.synth.zone_rows = rows;
        cfg.synth.zone_cols = cols;
    }
    if (o.demand_case) cfg.demand_case = *o.demand_case;
    if (o.validation_frac) cfg.validation_frac = *o.validation_frac;
    if (o.grid_side) cfg.grid_side = true;
    if (o.impulse) cfg.impulse = true;
    if (o.stratify) cfg.stratify = true;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"EV charging demand pipeline: trajectory ingestion, trip and charging-event "
                 "extraction, zone labeling, model training, and hourly demand profiles."};
    app.require_subcommand(1);

    Overrides o;
    std::string stage;
    for (const std::string& name : evdemand::pipeline_stages()) {
        std::string desc;
        if (name == "ingest") desc = "Parse the raw CSVs and summarize cohort record counts";
        else if (name == "trips") desc = "Segment records into trips and write per-cohort trip tables";
        else if (name == "behavior") desc = "Write EV vs ICEV travel-behavior histograms and stats";
        else if (name == "label") desc = "Detect charging events and assign zone labels";
        else if (name == "dataset") desc = "Assemble the feature/target table and the train/test split";
        else if (name == "sweep") desc = "Run the hyperparameter sweeps for all model families";
        else if (name == "evaluate") desc = "Train tuned models and write the comparison report";
        else if (name == "demand") desc = "Synthesize zonal hourly charging-demand profiles";
        else if (name == "synth") desc = "Generate the seeded synthetic dataset and its ground truth";
        else desc = "Run every stage and write a hashed artifact manifest";
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("-c,--config", o.config_path,
                        std::string("Config file (default: $") + evdemand::kConfigEnvVar + ")");
        sub->add_option("-o,--out", o.out_dir, "Output directory (overrides config)");
        sub->add_option("--seed", o.seed, "Seed for the split and the synthetic generator");
        sub->add_option("--zones", o.zones, "Zone grid as ROWSxCOLS, e.g. 3x3");
        sub->add_option("--case", o.demand_case, "Demand case: 1 (predicted labels), 2 (actual), 0 both")
            ->check(CLI::Range(0, 2));
        sub->add_option("--validation-frac", o.validation_frac,
                        "Tune on a validation slice of this fraction instead of the test set");
        sub->add_flag("--grid-side", o.grid_side, "Report demand drawn from the grid (pre-efficiency)");
        sub->add_flag("--impulse-binning", o.impulse,
                      "Deposit each event's energy in its start bin instead of spreading");
        sub->add_flag("--stratify", o.stratify, "Stratify the train/test split by label");
        sub->callback([&stage, name] { stage = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "E_CONFIG: " << e.what() << "\n";
        return 2;
    }

    try {
        evdemand::PipelineRunner runner(resolve_config(o));
        for (const std::string& name : runner.run(stage))
            std::cout << runner.config().out_dir << "/" << name << "\n";
        return 0;
    } catch (const evdemand::ConfigError& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 2;
    } catch (const evdemand::DataError& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 3;
    } catch (const evdemand::ModelError& e) {
        std::cerr << e.code() << ": " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "E_INTERNAL: " << e.what() << "\n";
        return 1;
    }
}
