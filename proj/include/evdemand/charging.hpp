#pragma once

#include "evdemand/geo.hpp"
#include "evdemand/trips.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace evdemand {

struct ChargerParams {
    double cap_kwh = 24.0;  // battery capacity
    double alpha_kw = 6.6;  // charger rate (level-2 AC)
    double eta = 0.9;       // charging efficiency, (0, 1]
};

void validate(const ChargerParams& params);

// Trip plus its charging label. Labels 1..n are the zone charged in at the
// trip destination; n+1 is the dummy "no charge" class, in which case
// soc_req is 0.
struct LabeledTrip {
    Trip trip;
    int label = 0;
    double soc_req = 0.0;
};

struct ChargingEvent {
    std::int64_t vehicle_id = 0;
    int day_index = 0;
    std::int64_t trip_no = 0;
    int zone = 0;           // 1..n
    double start_h = 0.0;   // trip end time
    double cd_kwh = 0.0;    // energy delivered to the battery
    double duration_h = 0.0;
};

struct LabelResult {
    std::vector<LabeledTrip> labeled;
    std::size_t skipped_missing_soc = 0;
};

// For consecutive trips k, k+1 of one vehicle-day (ordered by start time):
// soc_req(k) = soc_dep(k+1) - soc_arr(k). A strictly positive requirement
// makes trip k a charging event in the zone of its destination; otherwise
// the label is n+1 with soc_req clamped to 0. The last trip of each
// vehicle-day is n+1 (the next departure SOC is unknown). Trips without SOC
// are skipped and counted.
LabelResult label_trips(std::span<const Trip> trips, const ZoneGrid& grid);

// cd = soc_req/100 * cap for positive requirements, else 0;
// duration = cd / (alpha * eta).
double charging_demand(double soc_req, const ChargerParams& params);
double charging_duration(double cd_kwh, const ChargerParams& params);

// One event per labeled trip with label <= zone_count, located at the trip
// destination zone and starting at the trip end time.
std::vector<ChargingEvent> to_events(std::span<const LabeledTrip> labeled,
                                     const ChargerParams& params, int zone_count);

// CSV layout: vehicle_id, trip_no, t_start, t_end, origin_lat, origin_lon,
// label, soc_dep, soc_req.
std::string labeled_to_csv(std::span<const LabeledTrip> labeled);

} // namespace evdemand
