#include "evdemand/behavior.hpp"

#include "evdemand/csv.hpp"
#include "evdemand/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace evdemand {

using nlohmann::json;

Histogram histogram(std::span<const double> values, double bin_width, double lo, double hi) {
    if (!(bin_width > 0.0)) throw DataError("histogram bin width must be positive");
    if (!(lo < hi)) throw DataError("histogram range must satisfy lo < hi");

    const int nbins = static_cast<int>(std::ceil((hi - lo) / bin_width - 1e-12));
    Histogram h;
    h.bin_edges.resize(static_cast<std::size_t>(nbins) + 1);
    for (int k = 0; k <= nbins; ++k) h.bin_edges[static_cast<std::size_t>(k)] = lo + k * bin_width;
    h.counts.assign(static_cast<std::size_t>(nbins), 0);
    h.total = static_cast<std::int64_t>(values.size());

    for (double v : values) {
        if (v < lo || v >= hi) {
            ++h.out_of_range;
            continue;
        }
        int k = static_cast<int>(std::floor((v - lo) / bin_width));
        k = std::clamp(k, 0, nbins - 1);
        ++h.counts[static_cast<std::size_t>(k)];
    }
    return h;
}

std::string Histogram::to_csv() const {
    std::ostringstream ss;
    CsvWriter w(ss);
    w.row({"bin_lo", "bin_hi", "count"});
    for (std::size_t k = 0; k < counts.size(); ++k) {
        w.row({format_double(bin_edges[k]), format_double(bin_edges[k + 1]),
               std::to_string(counts[k])});
    }
    return ss.str();
}

CohortStats cohort_stats(const std::string& name, std::span<const Trip> trips,
                         const BehaviorBins& bins) {
    CohortStats s;
    s.name = name;
    s.trip_count = trips.size();

    std::vector<double> distances, starts, ends;
    distances.reserve(trips.size());
    starts.reserve(trips.size());
    ends.reserve(trips.size());
    for (const Trip& t : trips) {
        distances.push_back(t.distance_km);
        starts.push_back(t.t_start);
        ends.push_back(std::fmod(t.t_end, 24.0));
        s.max_distance_km = std::max(s.max_distance_km, t.distance_km);
    }

    std::vector<double> daily;
    for (const auto& [key, count] : daily_trip_counts(trips)) {
        daily.push_back(static_cast<double>(count));
    }

    s.distance = histogram(distances, bins.distance_width_km, 0.0, bins.distance_max_km);
    s.start_hour = histogram(starts, bins.hour_width, 0.0, 24.0);
    s.end_hour = histogram(ends, bins.hour_width, 0.0, 24.0);
    s.daily_trips = histogram(daily, 1.0, 0.0, bins.daily_trips_max);
    return s;
}

BehaviorReport behavior_report(std::span<const Trip> ev_trips,
                               std::span<const Trip> icev_trips,
                               const BehaviorBins& bins) {
    return {cohort_stats("ev", ev_trips, bins), cohort_stats("icev", icev_trips, bins)};
}

namespace {

json histogram_json(const Histogram& h) {
    return json{{"bin_edges", h.bin_edges},
                {"counts", h.counts},
                {"total", h.total},
                {"out_of_range", h.out_of_range}};
}

json cohort_json(const CohortStats& s) {
    return json{{"name", s.name},
                {"trip_count", s.trip_count},
                {"max_distance_km", s.max_distance_km},
                {"distance", histogram_json(s.distance)},
                {"start_hour", histogram_json(s.start_hour)},
                {"end_hour", histogram_json(s.end_hour)},
                {"daily_trips", histogram_json(s.daily_trips)}};
}

} // namespace

std::string behavior_report_json(const BehaviorReport& report) {
    json j{{"ev", cohort_json(report.ev)}, {"icev", cohort_json(report.icev)}};
    return j.dump(2) + "\n";
}

} // namespace evdemand
