#include "evdemand/synth.hpp"

#include "evdemand/errors.hpp"
#include "evdemand/rng.hpp"

#include <algorithm>
#include <cmath>

namespace evdemand {

namespace {

double round2(double x) { return std::round(x * 100.0) / 100.0; }

double propensity_of(const SynthConfig& cfg, int cell) {
    if (cfg.zone_propensity.empty()) return cfg.default_propensity;
    return cfg.zone_propensity[static_cast<std::size_t>(cell - 1)];
}

GeoPoint cell_interior_point(const ZoneGrid& grid, int zone, Rng& rng) {
    int row = (zone - 1) / grid.cols;
    int col = (zone - 1) % grid.cols;
    double lat_w = (grid.bbox.lat_max - grid.bbox.lat_min) / grid.rows;
    double lon_w = (grid.bbox.lon_max - grid.bbox.lon_min) / grid.cols;
    GeoPoint p;
    p.lat = grid.bbox.lat_min + lat_w * (row + 0.1 + 0.8 * rng.uniform01());
    p.lon = grid.bbox.lon_min + lon_w * (col + 0.1 + 0.8 * rng.uniform01());
    return p;
}

} // namespace

ZoneGrid synth_grid(const SynthConfig& cfg) {
    ZoneGrid grid{cfg.bbox, cfg.zone_rows, cfg.zone_cols};
    validate(grid);
    return grid;
}

int planted_zone(const SynthConfig& cfg, int cell, int band) {
    int n = cfg.zone_rows * cfg.zone_cols;
    return (cell - 1 + band * cfg.zone_cols) % n + 1;
}

int synth_band(const SynthConfig& cfg, double t_start) {
    int last = static_cast<int>(cfg.band_edges.size()) - 2;
    for (int b = 0; b < last; ++b)
        if (t_start < cfg.band_edges[static_cast<std::size_t>(b + 1)]) return b;
    return last;
}

void validate(const SynthConfig& cfg) {
    if (cfg.n_ev < 0 || cfg.n_icev < 0 || cfg.n_ev + cfg.n_icev < 1)
        throw ConfigError("synth: need at least one vehicle");
    if (cfg.days < 1) throw ConfigError("synth: days must be >= 1");
    validate(ZoneGrid{cfg.bbox, cfg.zone_rows, cfg.zone_cols});
    if (!cfg.zone_propensity.empty() &&
        cfg.zone_propensity.size() != static_cast<std::size_t>(cfg.zone_rows * cfg.zone_cols))
        throw ConfigError("synth: zone_propensity must have one entry per zone");
    for (double p : cfg.zone_propensity)
        if (p < 0.0 || p > 1.0) throw ConfigError("synth: propensities must lie in [0, 1]");
    if (cfg.default_propensity < 0.0 || cfg.default_propensity > 1.0)
        throw ConfigError("synth: propensities must lie in [0, 1]");
    if (cfg.p_det < 0.0 || cfg.p_det > 1.0) throw ConfigError("synth: p_det must lie in [0, 1]");
    if (cfg.band_edges.size() != 5) throw ConfigError("synth: band_edges must have 5 entries");
    for (std::size_t i = 0; i + 1 < cfg.band_edges.size(); ++i)
        if (!(cfg.band_edges[i] < cfg.band_edges[i + 1]))
            throw ConfigError("synth: band_edges must be strictly ascending");
    if (cfg.band_edges.front() < 0.0 || cfg.band_edges.back() > 24.0)
        throw ConfigError("synth: band_edges must lie in [0, 24]");
    if (!(cfg.trip_duration_h > 0.0)) throw ConfigError("synth: trip_duration_h must be positive");
    for (std::size_t i = 0; i + 1 < cfg.band_edges.size(); ++i)
        if (cfg.band_edges[i + 1] - cfg.band_edges[i] < cfg.trip_duration_h + 0.75)
            throw ConfigError("synth: band too narrow for the trip duration");
    if (cfg.drain_per_km < 0.0) throw ConfigError("synth: drain_per_km must be >= 0");
    double diag = haversine_km({cfg.bbox.lat_min, cfg.bbox.lon_min},
                               {cfg.bbox.lat_max, cfg.bbox.lon_max});
    if (cfg.drain_per_km * diag > 25.0)
        throw ConfigError("synth: per-trip SOC drain can exceed the battery headroom");
    if (cfg.req_lo < 0.5 || cfg.req_hi < cfg.req_lo || cfg.req_hi > 60.0)
        throw ConfigError("synth: planted SOC jump range must satisfy 0.5 <= lo <= hi <= 60");
    if (cfg.min_trips < 1 || cfg.max_trips < cfg.min_trips || cfg.max_trips > 4)
        throw ConfigError("synth: trips per day must satisfy 1 <= min <= max <= 4");
}

int synth_oracle_label(const SynthConfig& cfg, const FeatureRow& x) {
    const int n = cfg.zone_rows * cfg.zone_cols;
    const int dummy = n + 1;
    const int band = synth_band(cfg, x.t_start);
    if (band >= 3) return dummy;
    ZoneGrid grid{cfg.bbox, cfg.zone_rows, cfg.zone_cols};
    int cell = zone_of(grid, {x.origin_lat, x.origin_lon});
    double q = propensity_of(cfg, cell);
    double p_planted = q * (cfg.p_det + (1.0 - cfg.p_det) / n);
    double p_dummy = 1.0 - q;
    return p_planted > p_dummy ? planted_zone(cfg, cell, band) : dummy;
}

SynthResult generate(const SynthConfig& cfg) {
    validate(cfg);

    SynthResult out;
    out.grid = synth_grid(cfg);
    const int n_zones = out.grid.zone_count();
    const int dummy = n_zones + 1;
    const std::int64_t dur_ms =
        static_cast<std::int64_t>(std::llround(cfg.trip_duration_h * 3'600'000.0));

    struct PendingTrip {
        std::int64_t trip_no;
        int band;
        double t_start;
        GeoPoint origin, dest;
        bool event;
    };

    auto emit_vehicle = [&](std::int64_t vehicle_id, bool is_ev) {
        Rng rng = Rng::for_stream(cfg.seed, static_cast<std::uint64_t>(vehicle_id));
        std::int64_t trip_counter = 0;
        for (int day = 1; day <= cfg.days; ++day) {
            int n_trips = cfg.min_trips + static_cast<int>(rng.below(
                                              static_cast<std::uint64_t>(cfg.max_trips - cfg.min_trips + 1)));
            double soc = round2(65.0 + 30.0 * rng.uniform01()); // EV only; drawn regardless

            std::vector<PendingTrip> day_trips;
            for (int j = 0; j < n_trips; ++j) {
                PendingTrip t;
                t.trip_no = ++trip_counter;
                t.band = j == n_trips - 1 ? 3 : std::min(j, 2);
                double lo = cfg.band_edges[static_cast<std::size_t>(t.band)];
                double width = cfg.band_edges[static_cast<std::size_t>(t.band + 1)] - lo;
                auto n_slots = static_cast<std::uint64_t>(
                    std::floor((width - cfg.trip_duration_h - 0.5) / 0.25));
                t.t_start = lo + 0.25 * (1.0 + static_cast<double>(rng.below(n_slots)));

                t.origin.lat = rng.uniform(cfg.bbox.lat_min, cfg.bbox.lat_max);
                t.origin.lon = rng.uniform(cfg.bbox.lon_min, cfg.bbox.lon_max);

                t.event = false;
                if (is_ev && j < n_trips - 1) {
                    int cell = zone_of(out.grid, t.origin);
                    t.event = rng.bernoulli(propensity_of(cfg, cell));
                    if (t.event) {
                        int zone = rng.bernoulli(cfg.p_det)
                                       ? planted_zone(cfg, cell, t.band)
                                       : 1 + static_cast<int>(rng.below(
                                                 static_cast<std::uint64_t>(n_zones)));
                        t.dest = cell_interior_point(out.grid, zone, rng);
                        day_trips.push_back(t);
                        continue;
                    }
                }
                double spread = is_ev ? 0.06 : 0.15;
                t.dest.lat = std::clamp(t.origin.lat + rng.uniform(-spread, spread),
                                        cfg.bbox.lat_min, cfg.bbox.lat_max);
                t.dest.lon = std::clamp(t.origin.lon + rng.uniform(-spread, spread),
                                        cfg.bbox.lon_min, cfg.bbox.lon_max);
                day_trips.push_back(t);
            }

            for (std::size_t j = 0; j < day_trips.size(); ++j) {
                const PendingTrip& t = day_trips[j];
                const double day_num = day + t.t_start / 24.0;

                RawRecord start_row{day_num, vehicle_id, t.trip_no, 0, t.origin, std::nullopt};
                RawRecord end_row{day_num, vehicle_id, t.trip_no, dur_ms, t.dest, std::nullopt};

                if (is_ev) {
                    double dep = soc;
                    double drain = round2(cfg.drain_per_km * haversine_km(t.origin, t.dest));
                    double arr = std::max(round2(dep - drain), 1.0);

                    TruthEntry truth{vehicle_id, day, t.trip_no, dummy, 0.0};
                    double next_dep = arr;
                    if (t.event && j + 1 < day_trips.size()) {
                        double req0 =
                            round2(cfg.req_lo + (cfg.req_hi - cfg.req_lo) * rng.uniform01());
                        double headroom = round2(100.0 - arr - 1.0);
                        if (req0 > headroom) req0 = headroom;
                        if (req0 > 0.5) {
                            next_dep = arr + req0;
                            // Record the jump exactly as the pipeline will
                            // recompute it from the serialized SOC values.
                            truth.label = zone_of(out.grid, t.dest);
                            truth.soc_req = next_dep - arr;
                        }
                    }
                    start_row.soc_pct = dep;
                    end_row.soc_pct = arr;
                    out.truth.push_back(truth);
                    soc = next_dep;
                }

                out.records.push_back(start_row);
                out.records.push_back(end_row);
            }
        }
    };

    for (int v = 1; v <= cfg.n_ev; ++v) {
        out.vehicles.push_back({v, Powertrain::PhevEv});
        emit_vehicle(v, true);
    }
    for (int v = 1; v <= cfg.n_icev; ++v) {
        out.vehicles.push_back({1000 + v, Powertrain::Icev});
        emit_vehicle(1000 + v, false);
    }
    return out;
}

} // namespace evdemand
