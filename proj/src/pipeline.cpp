#include "evdemand/pipeline.hpp"

#include "evdemand/csv.hpp"
#include "evdemand/errors.hpp"
#include "evdemand/hash.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <sstream>
#include <utility>

namespace evdemand {

using nlohmann::json;

const std::vector<std::string>& pipeline_stages() {
    static const std::vector<std::string> stages = {"ingest",  "trips",  "behavior", "label",
                                                    "dataset", "sweep",  "evaluate", "demand",
                                                    "synth",   "report"};
    return stages;
}

PipelineRunner::PipelineRunner(PipelineConfig cfg) : cfg_(std::move(cfg)) {
    validate(cfg_);
}

void PipelineRunner::write_artifact(const std::string& name, std::string content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg_.out_dir, ec);
    if (ec) throw ConfigError("cannot create output dir " + cfg_.out_dir + ": " + ec.message());
    write_file((fs::path(cfg_.out_dir) / name).string(), content);
    written_[name] = std::move(content);
    run_files_.push_back(name);
}

const PipelineRunner::Source& PipelineRunner::source() {
    if (source_) return *source_;
    Source s;
    std::vector<RawRecord> records;
    if (cfg_.dynamic_csv.empty()) {
        s.synthetic = true;
        if (!synth_) synth_ = generate(cfg_.synth);
        records = synth_->records;
        s.vehicles = synth_->vehicles;
    } else {
        StaticParseResult st = parse_static_text(read_file(cfg_.static_csv), cfg_.static_schema);
        s.vehicles = std::move(st.vehicles);
        s.static_rejects = std::move(st.rejects);
        records = parse_dynamic_text(read_file(cfg_.dynamic_csv), cfg_.dyn_schema);
    }
    s.dynamic_rows = records.size();
    FilterResult ev = filter_by_powertrain(records, s.vehicles, {Powertrain::PhevEv});
    FilterResult icev = filter_by_powertrain(records, s.vehicles, {Powertrain::Icev});
    s.dropped_unknown_vehicle = ev.dropped_unknown_vehicle;
    s.ev_records = std::move(ev.records);
    s.icev_records = std::move(icev.records);
    source_ = std::move(s);
    return *source_;
}

bool PipelineRunner::synthetic_source() { return source().synthetic; }

const std::vector<Trip>& PipelineRunner::ev_trips() {
    if (!ev_trips_) ev_trips_ = build_trips(source().ev_records);
    return ev_trips_->trips;
}

const std::vector<Trip>& PipelineRunner::icev_trips() {
    if (!icev_trips_) icev_trips_ = build_trips(source().icev_records);
    return icev_trips_->trips;
}

const ZoneGrid& PipelineRunner::grid() {
    if (grid_) return grid_->first;
    if (cfg_.bbox) {
        grid_ = {ZoneGrid{*cfg_.bbox, cfg_.zone_rows, cfg_.zone_cols}, "config"};
    } else if (source().synthetic) {
        grid_ = {synth_grid(cfg_.synth), "synth"};
    } else {
        std::vector<GeoPoint> pts;
        for (const Trip& t : ev_trips()) {
            pts.push_back(t.origin);
            pts.push_back(t.dest);
        }
        grid_ = {ZoneGrid{fit_bbox(pts), cfg_.zone_rows, cfg_.zone_cols}, "fitted"};
    }
    validate(grid_->first);
    return grid_->first;
}

const std::vector<LabeledTrip>& PipelineRunner::labeled() {
    if (!labeled_) labeled_ = label_trips(ev_trips(), grid());
    return labeled_->labeled;
}

const SplitDataset& PipelineRunner::split() {
    if (!split_) {
        std::vector<DataRow> rows = build_dataset(labeled());
        split_ = train_test_split(std::move(rows), cfg_.test_frac, cfg_.seed, cfg_.stratify);
    }
    return *split_;
}

const Evaluation& PipelineRunner::evaluation() {
    if (!evaluation_) {
        EvalOptions opt;
        opt.zone_count = grid().zone_count();
        opt.n_trees = cfg_.n_trees;
        opt.min_leaf = cfg_.min_leaf;
        opt.mtry = cfg_.mtry;
        opt.model_seed = cfg_.seed;
        opt.validation_frac = cfg_.validation_frac;
        evaluation_ = evaluate_all(cfg_.grids, split(), opt);
    }
    return *evaluation_;
}

void PipelineRunner::stage_synth() {
    if (!synth_) synth_ = generate(cfg_.synth);
    write_artifact("synth_dynamic.csv", serialize_dynamic(synth_->records, cfg_.dyn_schema));
    write_artifact("synth_static.csv", serialize_static(synth_->vehicles, cfg_.static_schema));
    std::ostringstream ss;
    CsvWriter w(ss);
    w.row({"vehicle_id", "day_index", "trip_no", "label", "soc_req"});
    for (const TruthEntry& t : synth_->truth)
        w.row({std::to_string(t.vehicle_id), std::to_string(t.day_index),
               std::to_string(t.trip_no), std::to_string(t.label), format_double(t.soc_req)});
    write_artifact("synth_truth.csv", ss.str());
}

void PipelineRunner::stage_ingest() {
    const Source& s = source();
    std::size_t n_ev = 0, n_icev = 0, n_hev = 0;
    for (const VehicleInfo& v : s.vehicles) {
        if (v.powertrain == Powertrain::PhevEv) ++n_ev;
        else if (v.powertrain == Powertrain::Icev) ++n_icev;
        else ++n_hev;
    }
    json j{{"version", 1},
           {"source", s.synthetic ? "synthetic" : "files"},
           {"dynamic_rows", s.dynamic_rows},
           {"vehicles", {{"total", s.vehicles.size()},
                         {"ev", n_ev},
                         {"icev", n_icev},
                         {"hev", n_hev}}},
           {"static_rejects", s.static_rejects},
           {"ev_records", s.ev_records.size()},
           {"icev_records", s.icev_records.size()},
           {"dropped_unknown_vehicle", s.dropped_unknown_vehicle}};
    write_artifact("ingest_summary.json", j.dump(2) + "\n");
}

void PipelineRunner::stage_trips() {
    write_artifact("trips_ev.csv", trips_to_csv(ev_trips()));
    write_artifact("trips_icev.csv", trips_to_csv(icev_trips()));
}

void PipelineRunner::stage_behavior() {
    BehaviorReport report = behavior_report(ev_trips(), icev_trips(), cfg_.bins);
    write_artifact("behavior.json", behavior_report_json(report));
    for (const CohortStats* c : {&report.ev, &report.icev}) {
        write_artifact("behavior_" + c->name + "_distance.csv", c->distance.to_csv());
        write_artifact("behavior_" + c->name + "_start_hour.csv", c->start_hour.to_csv());
        write_artifact("behavior_" + c->name + "_end_hour.csv", c->end_hour.to_csv());
        write_artifact("behavior_" + c->name + "_daily_trips.csv", c->daily_trips.to_csv());
    }
}

void PipelineRunner::stage_label() {
    const ZoneGrid& g = grid();
    labeled();
    json j{{"version", 1},
           {"rows", g.rows},
           {"cols", g.cols},
           {"zone_count", g.zone_count()},
           {"source", grid_->second},
           {"bbox", {{"lat_min", g.bbox.lat_min},
                     {"lat_max", g.bbox.lat_max},
                     {"lon_min", g.bbox.lon_min},
                     {"lon_max", g.bbox.lon_max}}},
           {"skipped_missing_soc", labeled_->skipped_missing_soc}};
    write_artifact("zones.json", j.dump(2) + "\n");
    write_artifact("labeled.csv", labeled_to_csv(labeled()));
}

void PipelineRunner::stage_dataset() {
    write_artifact("dataset.csv", dataset_to_csv(split().rows));
    write_artifact("split.json", split_to_json(split()));
}

void PipelineRunner::stage_sweep() {
    json sweeps = json::array();
    for (const EvaluatedModel& e : evaluation().entries) {
        json points = json::array();
        for (const SweepPoint& p : e.sweep.points)
            points.push_back({{"param", p.param}, {"score", p.score}});
        sweeps.push_back({{"family", family_name(e.sweep.family)},
                          {"target", target_name(e.sweep.target)},
                          {"param_name", e.sweep.param_name},
                          {"metric", e.sweep.metric},
                          {"points", std::move(points)},
                          {"chosen_param", e.sweep.chosen},
                          {"chosen_score", e.sweep.chosen_score}});
    }
    json j{{"version", 1}, {"sweeps", std::move(sweeps)}};
    write_artifact("sweep.json", j.dump(2) + "\n");
}

void PipelineRunner::stage_evaluate() {
    const Evaluation& ev = evaluation();
    write_artifact("comparison.csv", comparison_to_csv(ev));
    write_artifact("comparison.json", comparison_to_json(ev));
    for (const EvaluatedModel& e : ev.entries) {
        std::string name = std::string("model_") + family_name(e.sweep.family) + "_" +
                           target_name(e.sweep.target) + ".json";
        write_artifact(name, model_to_json(e.model));
        if (e.sweep.target == Target::Label) {
            std::vector<int> pred = predict_labels(e.model, split().rows, split().test_idx);
            std::vector<int> truth = label_targets(split().rows, split().test_idx);
            write_artifact(std::string("confusion_") + family_name(e.sweep.family) + ".csv",
                           confusion_to_csv(confusion(pred, truth)));
        }
    }
}

void PipelineRunner::stage_demand() {
    const Evaluation& ev = evaluation();
    CaseModels models;
    models.label = &ev.best(Target::Label).model;
    models.t_end = &ev.best(Target::TEnd).model;
    models.soc_req = &ev.best(Target::SocReq).model;

    DemandOptions opt{cfg_.grid_side, cfg_.impulse};
    for (int case_id : {1, 2}) {
        if (cfg_.demand_case != 0 && cfg_.demand_case != case_id) continue;
        std::vector<ChargingEvent> events =
            predict_events(case_id, models, split().rows, split().test_idx,
                           grid().zone_count(), cfg_.charger);
        DemandProfile profile = aggregate(events, grid().zone_count(), cfg_.charger, opt);
        profile.case_id = case_id;
        std::string base = "demand_case" + std::to_string(case_id);
        write_artifact(base + ".csv", demand_to_csv(profile));
        write_artifact(base + ".json", demand_to_json(profile));
    }
}

void PipelineRunner::stage_report() {
    write_artifact("resolved_config.json", config_to_json(cfg_));
    if (source().synthetic) stage_synth();
    stage_ingest();
    stage_trips();
    stage_behavior();
    stage_label();
    stage_dataset();
    stage_sweep();
    stage_evaluate();
    stage_demand();

    json artifacts = json::array();
    for (const auto& [name, content] : written_) { // std::map: sorted by name
        // The config echo records where the run went (out_dir), so hashing it
        // would make manifests differ across output locations.
        if (name == "resolved_config.json") continue;
        artifacts.push_back({{"path", name},
                             {"bytes", content.size()},
                             {"fnv1a64", fnv1a64_hex(content)}});
    }
    json j{{"version", 1}, {"artifacts", std::move(artifacts)}};
    write_artifact("manifest.json", j.dump(2) + "\n");
}

std::vector<std::string> PipelineRunner::run(const std::string& stage) {
    run_files_.clear();
    if (stage == "ingest") stage_ingest();
    else if (stage == "trips") stage_trips();
    else if (stage == "behavior") stage_behavior();
    else if (stage == "label") stage_label();
    else if (stage == "dataset") stage_dataset();
    else if (stage == "sweep") stage_sweep();
    else if (stage == "evaluate") stage_evaluate();
    else if (stage == "demand") stage_demand();
    else if (stage == "synth") stage_synth();
    else if (stage == "report") stage_report();
    else throw ConfigError("unknown stage: " + stage);
    return run_files_;
}

} // namespace evdemand
