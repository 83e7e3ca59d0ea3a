#pragma once

#include "evdemand/geo.hpp"
#include "evdemand/ingest.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace evdemand {

// Per-trip summary derived from the raw trajectory records.
struct Trip {
    std::int64_t vehicle_id = 0;
    int day_index = 0;              // floor(day_num)
    std::int64_t trip_no = 0;
    double t_start = 0.0;           // hours in [0, 24), frac(day_num) * 24
    double t_end = 0.0;             // t_start + last timestamp; may exceed 24
    GeoPoint origin;
    GeoPoint dest;
    double distance_km = 0.0;       // sum of consecutive great-circle steps
    std::optional<double> soc_dep;  // first recorded SOC
    std::optional<double> soc_arr;  // last recorded SOC
};

struct TripBuildResult {
    std::vector<Trip> trips;                 // sorted by (vehicle, day, t_start, trip_no)
    std::size_t gps_missing_rows = 0;        // rows excluded from OD/distance
    std::size_t trips_dropped_no_gps = 0;    // groups with zero usable fixes
};

// Groups records by (vehicle_id, day_index, trip_no), orders each group by
// timestamp, and derives the trip parameters. Input order is irrelevant.
// A group whose day_num values disagree by more than 1e-6 day throws
// DataError.
TripBuildResult build_trips(std::span<const RawRecord> records);

std::map<std::pair<std::int64_t, int>, int> daily_trip_counts(std::span<const Trip> trips);

// CSV with columns vehicle_id, day_index, trip_no, t_start, t_end,
// origin_lat, origin_lon, dest_lat, dest_lon, distance_km, soc_dep, soc_arr.
// Absent SOC serializes as an empty cell.
std::string trips_to_csv(std::span<const Trip> trips);

} // namespace evdemand
