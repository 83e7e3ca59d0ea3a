#include "evdemand/config.hpp"

#include "evdemand/csv.hpp"
#include "evdemand/errors.hpp"

#include <nlohmann/json.hpp>

#include <initializer_list>
#include <string>

namespace evdemand {

using nlohmann::json;

namespace {

void expect_keys(const json& j, const std::string& where,
                 std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) {
                ok = true;
                break;
            }
        if (!ok) throw ConfigError("config: unknown key " + where + "." + key);
    }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

BoundingBox bbox_from_json(const json& j, const std::string& where) {
    expect_keys(j, where, {"lat_min", "lat_max", "lon_min", "lon_max"});
    BoundingBox b;
    b.lat_min = j.at("lat_min").get<double>();
    b.lat_max = j.at("lat_max").get<double>();
    b.lon_min = j.at("lon_min").get<double>();
    b.lon_max = j.at("lon_max").get<double>();
    return b;
}

json bbox_to_json(const BoundingBox& b) {
    return json{{"lat_min", b.lat_min},
                {"lat_max", b.lat_max},
                {"lon_min", b.lon_min},
                {"lon_max", b.lon_max}};
}

} // namespace

void validate(const PipelineConfig& cfg) {
    if (cfg.dynamic_csv.empty() != cfg.static_csv.empty())
        throw ConfigError("config: paths.dynamic_csv and paths.static_csv go together");
    if (cfg.out_dir.empty()) throw ConfigError("config: paths.out_dir must be set");
    if (cfg.zone_rows < 1 || cfg.zone_cols < 1)
        throw ConfigError("config: zones.rows and zones.cols must be >= 1");
    if (cfg.bbox) validate(*cfg.bbox);
    validate(cfg.charger);
    if (!(cfg.test_frac > 0.0) || !(cfg.test_frac < 1.0))
        throw ConfigError("config: split.test_frac must be in (0, 1)");
    if (cfg.validation_frac && (!(*cfg.validation_frac > 0.0) || !(*cfg.validation_frac < 1.0)))
        throw ConfigError("config: split.validation_frac must be in (0, 1)");
    if (cfg.grids.knn_k.empty() || cfg.grids.dt_depth.empty() || cfg.grids.rf_depth.empty())
        throw ConfigError("config: sweep grids must be non-empty");
    for (int k : cfg.grids.knn_k)
        if (k < 1) throw ConfigError("config: sweep.knn.k entries must be >= 1");
    for (int d : cfg.grids.dt_depth)
        if (d < 0) throw ConfigError("config: sweep.dt.depth entries must be >= 0");
    for (int d : cfg.grids.rf_depth)
        if (d < 0) throw ConfigError("config: sweep.rf.depth entries must be >= 0");
    if (cfg.n_trees < 1) throw ConfigError("config: models.n_trees must be >= 1");
    if (cfg.min_leaf < 1) throw ConfigError("config: models.min_leaf must be >= 1");
    if (cfg.mtry < 0) throw ConfigError("config: models.mtry must be >= 0");
    if (cfg.demand_case < 0 || cfg.demand_case > 2)
        throw ConfigError("config: demand.case must be 0, 1, or 2");
    validate(cfg.synth);
}

PipelineConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    PipelineConfig cfg;
    try {
        expect_keys(j, "$",
                    {"version", "paths", "schema", "zones", "charger", "split", "sweep",
                     "models", "demand", "behavior", "synth"});
        if (j.contains("version") && j.at("version").get<int>() != 1)
            throw ConfigError("config: unsupported version");

        if (j.contains("paths")) {
            const json& p = j.at("paths");
            expect_keys(p, "paths", {"static_csv", "dynamic_csv", "out_dir"});
            get_if(p, "static_csv", cfg.static_csv);
            get_if(p, "dynamic_csv", cfg.dynamic_csv);
            get_if(p, "out_dir", cfg.out_dir);
        }
        if (j.contains("schema")) {
            const json& s = j.at("schema");
            expect_keys(s, "schema", {"dynamic", "static"});
            if (s.contains("dynamic")) {
                const json& d = s.at("dynamic");
                expect_keys(d, "schema.dynamic",
                            {"day_num", "vehicle_id", "trip_no", "timestamp_ms", "lat", "lon",
                             "soc"});
                get_if(d, "day_num", cfg.dyn_schema.day_num);
                get_if(d, "vehicle_id", cfg.dyn_schema.vehicle_id);
                get_if(d, "trip_no", cfg.dyn_schema.trip_no);
                get_if(d, "timestamp_ms", cfg.dyn_schema.timestamp_ms);
                get_if(d, "lat", cfg.dyn_schema.lat);
                get_if(d, "lon", cfg.dyn_schema.lon);
                get_if(d, "soc", cfg.dyn_schema.soc);
            }
            if (s.contains("static")) {
                const json& t = s.at("static");
                expect_keys(t, "schema.static", {"vehicle_id", "vehicle_type"});
                get_if(t, "vehicle_id", cfg.static_schema.vehicle_id);
                get_if(t, "vehicle_type", cfg.static_schema.vehicle_type);
            }
        }
        if (j.contains("zones")) {
            const json& z = j.at("zones");
            expect_keys(z, "zones", {"rows", "cols", "bbox"});
            get_if(z, "rows", cfg.zone_rows);
            get_if(z, "cols", cfg.zone_cols);
            if (z.contains("bbox") && !z.at("bbox").is_null())
                cfg.bbox = bbox_from_json(z.at("bbox"), "zones.bbox");
        }
        if (j.contains("charger")) {
            const json& c = j.at("charger");
            expect_keys(c, "charger", {"cap_kwh", "alpha_kw", "eta"});
            get_if(c, "cap_kwh", cfg.charger.cap_kwh);
            get_if(c, "alpha_kw", cfg.charger.alpha_kw);
            get_if(c, "eta", cfg.charger.eta);
        }
        if (j.contains("split")) {
            const json& s = j.at("split");
            expect_keys(s, "split", {"test_frac", "seed", "stratify", "validation_frac"});
            get_if(s, "test_frac", cfg.test_frac);
            get_if(s, "seed", cfg.seed);
            get_if(s, "stratify", cfg.stratify);
            if (s.contains("validation_frac") && !s.at("validation_frac").is_null())
                cfg.validation_frac = s.at("validation_frac").get<double>();
        }
        if (j.contains("sweep")) {
            const json& s = j.at("sweep");
            expect_keys(s, "sweep", {"knn", "dt", "rf"});
            if (s.contains("knn")) {
                expect_keys(s.at("knn"), "sweep.knn", {"k"});
                get_if(s.at("knn"), "k", cfg.grids.knn_k);
            }
            if (s.contains("dt")) {
                expect_keys(s.at("dt"), "sweep.dt", {"depth"});
                get_if(s.at("dt"), "depth", cfg.grids.dt_depth);
            }
            if (s.contains("rf")) {
                expect_keys(s.at("rf"), "sweep.rf", {"depth"});
                get_if(s.at("rf"), "depth", cfg.grids.rf_depth);
            }
        }
        if (j.contains("models")) {
            const json& m = j.at("models");
            expect_keys(m, "models", {"n_trees", "min_leaf", "mtry"});
            get_if(m, "n_trees", cfg.n_trees);
            get_if(m, "min_leaf", cfg.min_leaf);
            get_if(m, "mtry", cfg.mtry);
        }
        if (j.contains("demand")) {
            const json& d = j.at("demand");
            expect_keys(d, "demand", {"case", "grid_side", "impulse_binning"});
            get_if(d, "case", cfg.demand_case);
            get_if(d, "grid_side", cfg.grid_side);
            get_if(d, "impulse_binning", cfg.impulse);
        }
        if (j.contains("behavior")) {
            const json& b = j.at("behavior");
            expect_keys(b, "behavior",
                        {"distance_width_km", "distance_max_km", "hour_width",
                         "daily_trips_max"});
            get_if(b, "distance_width_km", cfg.bins.distance_width_km);
            get_if(b, "distance_max_km", cfg.bins.distance_max_km);
            get_if(b, "hour_width", cfg.bins.hour_width);
            get_if(b, "daily_trips_max", cfg.bins.daily_trips_max);
        }
        if (j.contains("synth")) {
            const json& s = j.at("synth");
            expect_keys(s, "synth",
                        {"n_ev", "n_icev", "days", "zone_rows", "zone_cols", "bbox",
                         "zone_propensity", "default_propensity", "p_det", "band_edges",
                         "trip_duration_h", "drain_per_km", "req_lo", "req_hi", "min_trips",
                         "max_trips", "seed"});
            get_if(s, "n_ev", cfg.synth.n_ev);
            get_if(s, "n_icev", cfg.synth.n_icev);
            get_if(s, "days", cfg.synth.days);
            get_if(s, "zone_rows", cfg.synth.zone_rows);
            get_if(s, "zone_cols", cfg.synth.zone_cols);
            if (s.contains("bbox") && !s.at("bbox").is_null())
                cfg.synth.bbox = bbox_from_json(s.at("bbox"), "synth.bbox");
            get_if(s, "zone_propensity", cfg.synth.zone_propensity);
            get_if(s, "default_propensity", cfg.synth.default_propensity);
            get_if(s, "p_det", cfg.synth.p_det);
            get_if(s, "band_edges", cfg.synth.band_edges);
            get_if(s, "trip_duration_h", cfg.synth.trip_duration_h);
            get_if(s, "drain_per_km", cfg.synth.drain_per_km);
            get_if(s, "req_lo", cfg.synth.req_lo);
            get_if(s, "req_hi", cfg.synth.req_hi);
            get_if(s, "min_trips", cfg.synth.min_trips);
            get_if(s, "max_trips", cfg.synth.max_trips);
            get_if(s, "seed", cfg.synth.seed);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: malformed field: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

std::string config_to_json(const PipelineConfig& cfg) {
    json j;
    j["version"] = 1;
    j["paths"] = {{"static_csv", cfg.static_csv},
                  {"dynamic_csv", cfg.dynamic_csv},
                  {"out_dir", cfg.out_dir}};
    j["schema"] = {{"dynamic",
                    {{"day_num", cfg.dyn_schema.day_num},
                     {"vehicle_id", cfg.dyn_schema.vehicle_id},
                     {"trip_no", cfg.dyn_schema.trip_no},
                     {"timestamp_ms", cfg.dyn_schema.timestamp_ms},
                     {"lat", cfg.dyn_schema.lat},
                     {"lon", cfg.dyn_schema.lon},
                     {"soc", cfg.dyn_schema.soc}}},
                   {"static",
                    {{"vehicle_id", cfg.static_schema.vehicle_id},
                     {"vehicle_type", cfg.static_schema.vehicle_type}}}};
    j["zones"] = {{"rows", cfg.zone_rows},
                  {"cols", cfg.zone_cols},
                  {"bbox", cfg.bbox ? bbox_to_json(*cfg.bbox) : json(nullptr)}};
    j["charger"] = {{"cap_kwh", cfg.charger.cap_kwh},
                    {"alpha_kw", cfg.charger.alpha_kw},
                    {"eta", cfg.charger.eta}};
    j["split"] = {{"test_frac", cfg.test_frac},
                  {"seed", cfg.seed},
                  {"stratify", cfg.stratify},
                  {"validation_frac",
                   cfg.validation_frac ? json(*cfg.validation_frac) : json(nullptr)}};
    j["sweep"] = {{"knn", {{"k", cfg.grids.knn_k}}},
                  {"dt", {{"depth", cfg.grids.dt_depth}}},
                  {"rf", {{"depth", cfg.grids.rf_depth}}}};
    j["models"] = {{"n_trees", cfg.n_trees}, {"min_leaf", cfg.min_leaf}, {"mtry", cfg.mtry}};
    j["demand"] = {{"case", cfg.demand_case},
                   {"grid_side", cfg.grid_side},
                   {"impulse_binning", cfg.impulse}};
    j["behavior"] = {{"distance_width_km", cfg.bins.distance_width_km},
                     {"distance_max_km", cfg.bins.distance_max_km},
                     {"hour_width", cfg.bins.hour_width},
                     {"daily_trips_max", cfg.bins.daily_trips_max}};
    j["synth"] = {{"n_ev", cfg.synth.n_ev},
                  {"n_icev", cfg.synth.n_icev},
                  {"days", cfg.synth.days},
                  {"zone_rows", cfg.synth.zone_rows},
                  {"zone_cols", cfg.synth.zone_cols},
                  {"bbox", bbox_to_json(cfg.synth.bbox)},
                  {"zone_propensity", cfg.synth.zone_propensity},
                  {"default_propensity", cfg.synth.default_propensity},
                  {"p_det", cfg.synth.p_det},
                  {"band_edges", cfg.synth.band_edges},
                  {"trip_duration_h", cfg.synth.trip_duration_h},
                  {"drain_per_km", cfg.synth.drain_per_km},
                  {"req_lo", cfg.synth.req_lo},
                  {"req_hi", cfg.synth.req_hi},
                  {"min_trips", cfg.synth.min_trips},
                  {"max_trips", cfg.synth.max_trips},
                  {"seed", cfg.synth.seed}};
    return j.dump(2) + "\n";
}

PipelineConfig load_config_file(const std::string& path) {
    return config_from_json(read_file(path));
}

} // namespace evdemand
