#pragma once

#include "evdemand/features.hpp"
#include "evdemand/geo.hpp"
#include "evdemand/ingest.hpp"

#include <cstdint>
#include <vector>

namespace evdemand {

// Seeded trajectory generator with planted, recoverable charging structure.
//
// Layout of one EV vehicle-day: 2..4 trips, one per start-hour band with the
// last trip always in the final band. A non-final trip charges at its
// destination with the origin cell's propensity; a charging destination lies
// in planted_zone(origin cell, band) with probability p_det, otherwise in a
// uniformly random zone. The last trip of a day never charges, which makes
// the dummy class a deterministic function of the final band. Trip duration
// is constant, so t_end - t_start is noiseless by construction.
struct SynthConfig {
    int n_ev = 40;
    int n_icev = 20;
    int days = 30;
    int zone_rows = 3;
    int zone_cols = 3;
    BoundingBox bbox{42.1, 42.5, -83.9, -83.3};
    std::vector<double> zone_propensity; // per origin cell; empty = uniform default
    double default_propensity = 0.75;
    double p_det = 0.9;                  // deterministic planted-zone fraction
    std::vector<double> band_edges = {6.0, 10.0, 14.0, 19.0, 23.0};
    double trip_duration_h = 0.4;
    double drain_per_km = 0.3;           // SOC percent per km
    double req_lo = 10.0;                // planted SOC jump range, percent
    double req_hi = 40.0;
    int min_trips = 2;
    int max_trips = 4;
    std::uint64_t seed = 42;
};

void validate(const SynthConfig& cfg);
ZoneGrid synth_grid(const SynthConfig& cfg);

// What label_trips must recover, one entry per generated EV trip.
struct TruthEntry {
    std::int64_t vehicle_id = 0;
    int day_index = 0;
    std::int64_t trip_no = 0;
    int label = 0;        // 1..n+1
    double soc_req = 0.0; // 0 for the dummy label
};

struct SynthResult {
    std::vector<RawRecord> records;    // dynamic rows, generation order
    std::vector<VehicleInfo> vehicles; // static rows (EVs then ICEVs)
    std::vector<TruthEntry> truth;     // EV trips only
    ZoneGrid grid;
};

// Deterministic for a fixed config; vehicles draw from independent
// (seed, vehicle_id) streams.
SynthResult generate(const SynthConfig& cfg);

// The planted zone for charging trips leaving a given cell in a given
// start-hour band (bands 0..2; band 3 never charges).
int planted_zone(const SynthConfig& cfg, int cell, int band);

// Start-hour band of a trip: index i with edges[i] <= t < edges[i+1]; times
// at or past the last edge belong to the final band.
int synth_band(const SynthConfig& cfg, double t_start);

// Bayes-optimal label prediction under the generator's structure. Its
// accuracy on generated data is the planted classification ceiling.
int synth_oracle_label(const SynthConfig& cfg, const FeatureRow& x);

} // namespace evdemand
