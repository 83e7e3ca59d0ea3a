#include <doctest.h>

#include "evdemand/errors.hpp"
#include "evdemand/geo.hpp"
#include "evdemand/rng.hpp"
#include "evdemand/trips.hpp"

#include <algorithm>
#include <vector>

using namespace evdemand;

namespace {

RawRecord rec(double day, std::int64_t veh, std::int64_t trip, std::int64_t ts,
              double lat, double lon, std::optional<double> soc = std::nullopt) {
    RawRecord r;
    r.day_num = day;
    r.vehicle_id = veh;
    r.trip_no = trip;
    r.timestamp_ms = ts;
    r.gps = GeoPoint{lat, lon};
    r.soc_pct = soc;
    return r;
}

} // namespace

TEST_CASE("build_trips: sample four-record trip") {
    std::vector<RawRecord> recs = {
        rec(5.5602, 371, 1288, 0, 42.2776, -83.7537, 94.344),
        rec(5.5602, 371, 1288, 200, 42.2776, -83.7537, 94.344),
        rec(5.5602, 371, 1288, 700, 42.2776, -83.7537, 94.344),
        rec(5.5602, 371, 1288, 1700, 42.2776, -83.7537, 94.344),
    };
    auto result = build_trips(recs);
    REQUIRE(result.trips.size() == 1);
    const Trip& t = result.trips[0];
    CHECK(t.vehicle_id == 371);
    CHECK(t.day_index == 5);
    CHECK(t.trip_no == 1288);
    // Start hour comes from the fractional day: frac(5.5602)*24 = 13.4448.
    CHECK(t.t_start == doctest::Approx(13.4448).epsilon(1e-13));
    CHECK(t.t_end == doctest::Approx(t.t_start + 1700.0 / 3'600'000.0).epsilon(1e-13));
    CHECK(t.distance_km == 0.0);
    CHECK(t.soc_dep == 94.344);
    CHECK(t.soc_arr == 94.344);
}

TEST_CASE("build_trips: single record degenerates cleanly") {
    std::vector<RawRecord> recs = {rec(2.5, 7, 1, 0, 42.0, -83.0)};
    auto result = build_trips(recs);
    REQUIRE(result.trips.size() == 1);
    CHECK(result.trips[0].t_end == result.trips[0].t_start);
    CHECK(result.trips[0].distance_km == 0.0);
    CHECK_FALSE(result.trips[0].soc_dep.has_value());
    CHECK_FALSE(result.trips[0].soc_arr.has_value());
}

TEST_CASE("build_trips: distance sums consecutive great-circle steps") {
    const double lat = 42.2776;
    std::vector<RawRecord> recs = {
        rec(3.25, 7, 1, 0, lat, -83.7537),
        rec(3.25, 7, 1, 100, lat, -83.7437),
        rec(3.25, 7, 1, 200, lat, -83.7337),
    };
    auto result = build_trips(recs);
    REQUIRE(result.trips.size() == 1);
    const double step = haversine_km({lat, -83.7537}, {lat, -83.7437});
    CHECK(result.trips[0].distance_km == doctest::Approx(2.0 * step).epsilon(1e-12));
    CHECK(result.trips[0].distance_km == doctest::Approx(1.6456).epsilon(2e-4));
    CHECK(result.trips[0].origin.lon == -83.7537);
    CHECK(result.trips[0].dest.lon == -83.7337);
}

TEST_CASE("build_trips: permutation-invariant in record order") {
    std::vector<RawRecord> recs;
    Rng rng(99);
    for (int veh = 1; veh <= 3; ++veh) {
        for (int trip = 1; trip <= 4; ++trip) {
            for (int s = 0; s < 5; ++s) {
                recs.push_back(rec(10.0 + trip * 0.1, veh, trip, s * 300,
                                   42.0 + 0.01 * s, -83.0 - 0.01 * s, 80.0 - s));
            }
        }
    }
    auto sorted_out = trips_to_csv(build_trips(recs).trips);
    for (int round = 0; round < 3; ++round) {
        rng.shuffle(recs);
        CHECK(trips_to_csv(build_trips(recs).trips) == sorted_out);
    }
}

TEST_CASE("build_trips: output ordered by vehicle, day, start time") {
    std::vector<RawRecord> recs = {
        rec(4.75, 2, 9, 0, 42.0, -83.0), // vehicle 2, 18h
        rec(4.25, 1, 5, 0, 42.0, -83.0), // vehicle 1 day 4, 6h
        rec(3.5, 1, 4, 0, 42.0, -83.0),  // vehicle 1 day 3, 12h
        rec(4.5, 1, 6, 0, 42.0, -83.0),  // vehicle 1 day 4, 12h
    };
    auto trips = build_trips(recs).trips;
    REQUIRE(trips.size() == 4);
    CHECK(trips[0].trip_no == 4);
    CHECK(trips[1].trip_no == 5);
    CHECK(trips[2].trip_no == 6);
    CHECK(trips[3].trip_no == 9);
}

TEST_CASE("build_trips: SOC comes from first/last present sample") {
    std::vector<RawRecord> recs = {
        rec(2.5, 7, 1, 0, 42.0, -83.0, std::nullopt),
        rec(2.5, 7, 1, 100, 42.0, -83.0, 90.0),
        rec(2.5, 7, 1, 200, 42.0, -83.0, 85.0),
        rec(2.5, 7, 1, 300, 42.0, -83.0, std::nullopt),
    };
    auto trips = build_trips(recs).trips;
    REQUIRE(trips.size() == 1);
    CHECK(trips[0].soc_dep == 90.0);
    CHECK(trips[0].soc_arr == 85.0);
}

TEST_CASE("build_trips: disagreeing day_num within a group is an integrity error") {
    std::vector<RawRecord> recs = {
        rec(2.5, 7, 1, 0, 42.0, -83.0),
        rec(2.5 + 5e-6, 7, 1, 100, 42.0, -83.0),
    };
    CHECK_THROWS_AS(build_trips(recs), DataError);
    // Sub-tolerance jitter is fine.
    recs[1].day_num = 2.5 + 5e-7;
    CHECK_NOTHROW(build_trips(recs));
}

TEST_CASE("build_trips: GPS-less rows excluded from OD and distance but counted") {
    std::vector<RawRecord> recs = {
        rec(2.5, 7, 1, 0, 42.0, -83.0, 90.0),
        rec(2.5, 7, 1, 100, 0.0, 0.0, 88.0),
        rec(2.5, 7, 1, 200, 42.1, -83.1, 86.0),
    };
    recs[1].gps.reset();
    auto result = build_trips(recs);
    REQUIRE(result.trips.size() == 1);
    CHECK(result.gps_missing_rows == 1);
    CHECK(result.trips[0].distance_km ==
          doctest::Approx(haversine_km({42.0, -83.0}, {42.1, -83.1})).epsilon(1e-12));
    // SOC still reads all samples, including the GPS-less one.
    CHECK(result.trips[0].soc_dep == 90.0);
    CHECK(result.trips[0].soc_arr == 86.0);

    // A group with zero usable fixes is dropped entirely and counted.
    std::vector<RawRecord> none = {rec(2.5, 8, 1, 0, 0, 0, 50.0)};
    none[0].gps.reset();
    auto dropped = build_trips(none);
    CHECK(dropped.trips.empty());
    CHECK(dropped.trips_dropped_no_gps == 1);
}

TEST_CASE("build_trips: trips crossing midnight keep t_end past 24") {
    std::vector<RawRecord> recs = {
        rec(2.999, 7, 1, 0, 42.0, -83.0),
        rec(2.999, 7, 1, 3'600'000, 42.0, -83.0),
    };
    auto trips = build_trips(recs).trips;
    REQUIRE(trips.size() == 1);
    CHECK(trips[0].t_start == doctest::Approx(23.976).epsilon(1e-12));
    CHECK(trips[0].t_end > 24.0);
}

TEST_CASE("daily_trip_counts") {
    SUBCASE("empty") { CHECK(daily_trip_counts({}).empty()); }
    SUBCASE("two same-day trips count as two; days separate") {
        std::vector<RawRecord> recs = {
            rec(2.25, 7, 1, 0, 42.0, -83.0), rec(2.5, 7, 2, 0, 42.0, -83.0),
            rec(3.5, 7, 3, 0, 42.0, -83.0),
        };
        auto trips = build_trips(recs).trips;
        auto counts = daily_trip_counts(trips);
        REQUIRE(counts.size() == 2);
        CHECK(counts.at({7, 2}) == 2);
        CHECK(counts.at({7, 3}) == 1);
    }
}
