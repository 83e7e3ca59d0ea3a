#include "evdemand/trips.hpp"

#include "evdemand/csv.hpp"
#include "evdemand/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace evdemand {

namespace {

struct GroupKey {
    std::int64_t vehicle_id;
    int day_index;
    std::int64_t trip_no;

    bool operator<(const GroupKey& o) const {
        return std::tie(vehicle_id, day_index, trip_no) <
               std::tie(o.vehicle_id, o.day_index, o.trip_no);
    }
    bool operator==(const GroupKey& o) const {
        return vehicle_id == o.vehicle_id && day_index == o.day_index && trip_no == o.trip_no;
    }
};

} // namespace

TripBuildResult build_trips(std::span<const RawRecord> records) {
    TripBuildResult result;

    // Sort indices by (group key, timestamp, file order). The file-order tail
    // keeps equal timestamps deterministic regardless of input permutation of
    // *distinct* rows; identical rows are interchangeable anyway.
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto key_of = [&](std::size_t i) {
        const RawRecord& r = records[i];
        return GroupKey{r.vehicle_id, static_cast<int>(std::floor(r.day_num)), r.trip_no};
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const GroupKey ka = key_of(a), kb = key_of(b);
        if (!(ka == kb)) return ka < kb;
        if (records[a].timestamp_ms != records[b].timestamp_ms) {
            return records[a].timestamp_ms < records[b].timestamp_ms;
        }
        return a < b;
    });

    std::size_t i = 0;
    while (i < order.size()) {
        const GroupKey key = key_of(order[i]);
        std::size_t j = i;
        while (j < order.size() && key_of(order[j]) == key) ++j;

        const RawRecord& first = records[order[i]];
        Trip trip;
        trip.vehicle_id = key.vehicle_id;
        trip.day_index = key.day_index;
        trip.trip_no = key.trip_no;

        const double day_num = first.day_num; // representative: earliest timestamp
        trip.t_start = (day_num - std::floor(day_num)) * 24.0;

        std::int64_t max_ts = 0;
        const GeoPoint* prev_gps = nullptr;
        bool have_gps = false;
        for (std::size_t k = i; k < j; ++k) {
            const RawRecord& r = records[order[k]];
            if (std::abs(r.day_num - day_num) > 1e-6) {
                throw DataError("inconsistent day_num within trip (vehicle " +
                                std::to_string(key.vehicle_id) + ", trip " +
                                std::to_string(key.trip_no) + "): " + format_double(day_num) +
                                " vs " + format_double(r.day_num));
            }
            max_ts = std::max(max_ts, r.timestamp_ms);
            if (r.gps) {
                if (!have_gps) {
                    trip.origin = *r.gps;
                    have_gps = true;
                } else {
                    trip.distance_km += haversine_km(*prev_gps, *r.gps);
                }
                trip.dest = *r.gps;
                prev_gps = &*r.gps;
            } else {
                ++result.gps_missing_rows;
            }
            if (r.soc_pct) {
                if (!trip.soc_dep) trip.soc_dep = r.soc_pct;
                trip.soc_arr = r.soc_pct;
            }
        }
        trip.t_end = trip.t_start + static_cast<double>(max_ts) / 3'600'000.0;

        if (have_gps) {
            result.trips.push_back(trip);
        } else {
            ++result.trips_dropped_no_gps;
        }
        i = j;
    }

    std::sort(result.trips.begin(), result.trips.end(), [](const Trip& a, const Trip& b) {
        return std::tie(a.vehicle_id, a.day_index, a.t_start, a.trip_no) <
               std::tie(b.vehicle_id, b.day_index, b.t_start, b.trip_no);
    });
    return result;
}

std::map<std::pair<std::int64_t, int>, int> daily_trip_counts(std::span<const Trip> trips) {
    std::map<std::pair<std::int64_t, int>, int> counts;
    for (const Trip& t : trips) ++counts[{t.vehicle_id, t.day_index}];
    return counts;
}

std::string trips_to_csv(std::span<const Trip> trips) {
    std::ostringstream ss;
    CsvWriter w(ss);
    w.row({"vehicle_id", "day_index", "trip_no", "t_start", "t_end", "origin_lat",
           "origin_lon", "dest_lat", "dest_lon", "distance_km", "soc_dep", "soc_arr"});
    for (const Trip& t : trips) {
        w.row({std::to_string(t.vehicle_id), std::to_string(t.day_index),
               std::to_string(t.trip_no), format_double(t.t_start), format_double(t.t_end),
               format_double(t.origin.lat), format_double(t.origin.lon),
               format_double(t.dest.lat), format_double(t.dest.lon),
               format_double(t.distance_km),
               t.soc_dep ? format_double(*t.soc_dep) : "",
               t.soc_arr ? format_double(*t.soc_arr) : ""});
    }
    return ss.str();
}

} // namespace evdemand
