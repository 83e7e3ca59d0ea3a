#pragma once

#include "evdemand/trips.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace evdemand {

struct Histogram {
    std::vector<double> bin_edges;     // ascending, size = counts.size() + 1
    std::vector<std::int64_t> counts;  // per uniform bin [edge_k, edge_{k+1})
    std::int64_t total = 0;            // number of input values
    std::int64_t out_of_range = 0;     // values below lo or >= hi

    std::string to_csv() const; // columns bin_lo, bin_hi, count
};

// Uniform bins of the given width over [lo, hi); values outside the range are
// counted separately. Throws DataError on non-positive width or lo >= hi.
Histogram histogram(std::span<const double> values, double bin_width, double lo, double hi);

struct BehaviorBins {
    double distance_width_km = 5.0;
    double distance_max_km = 120.0;
    double hour_width = 1.0;
    double daily_trips_max = 16.0;
};

struct CohortStats {
    std::string name;
    std::size_t trip_count = 0;
    double max_distance_km = 0.0;
    Histogram distance;
    Histogram start_hour;
    Histogram end_hour;    // end times reduced mod 24
    Histogram daily_trips;
};

struct BehaviorReport {
    CohortStats ev;
    CohortStats icev;
};

CohortStats cohort_stats(const std::string& name, std::span<const Trip> trips,
                         const BehaviorBins& bins = {});

BehaviorReport behavior_report(std::span<const Trip> ev_trips,
                               std::span<const Trip> icev_trips,
                               const BehaviorBins& bins = {});

std::string behavior_report_json(const BehaviorReport& report);

} // namespace evdemand
