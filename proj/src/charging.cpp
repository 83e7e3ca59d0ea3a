#include "evdemand/charging.hpp"

#include "evdemand/csv.hpp"
#include "evdemand/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

namespace evdemand {

void validate(const ChargerParams& params) {
    if (!(params.cap_kwh > 0.0)) throw ConfigError("charger cap_kwh must be positive");
    if (!(params.alpha_kw > 0.0)) throw ConfigError("charger alpha_kw must be positive");
    if (!(params.eta > 0.0) || params.eta > 1.0)
        throw ConfigError("charger eta must be in (0, 1]");
}

LabelResult label_trips(std::span<const Trip> trips, const ZoneGrid& grid) {
    validate(grid);
    const int dummy = grid.zone_count() + 1;

    // Group by vehicle-day, preserving order within each group. build_trips
    // emits trips sorted by (vehicle, day, t_start, trip_no); re-sorting here
    // keeps the function correct on arbitrary input order.
    std::vector<std::size_t> idx(trips.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const Trip& ta = trips[a];
        const Trip& tb = trips[b];
        if (ta.vehicle_id != tb.vehicle_id) return ta.vehicle_id < tb.vehicle_id;
        if (ta.day_index != tb.day_index) return ta.day_index < tb.day_index;
        if (ta.t_start != tb.t_start) return ta.t_start < tb.t_start;
        return ta.trip_no < tb.trip_no;
    });

    LabelResult result;
    result.labeled.reserve(trips.size());

    std::size_t g = 0;
    while (g < idx.size()) {
        std::size_t h = g;
        const Trip& first = trips[idx[g]];
        while (h < idx.size() && trips[idx[h]].vehicle_id == first.vehicle_id &&
               trips[idx[h]].day_index == first.day_index)
            ++h;

        // Within the group keep only trips with both SOC readings; pairing is
        // between consecutive retained trips.
        std::vector<std::size_t> kept;
        for (std::size_t i = g; i < h; ++i) {
            const Trip& t = trips[idx[i]];
            if (t.soc_dep.has_value() && t.soc_arr.has_value())
                kept.push_back(idx[i]);
            else
                ++result.skipped_missing_soc;
        }

        for (std::size_t k = 0; k < kept.size(); ++k) {
            LabeledTrip lt;
            lt.trip = trips[kept[k]];
            if (k + 1 < kept.size()) {
                double soc_req = *trips[kept[k + 1]].soc_dep - *lt.trip.soc_arr;
                if (soc_req > 0.0) {
                    lt.label = zone_of(grid, lt.trip.dest);
                    lt.soc_req = soc_req;
                } else {
                    lt.label = dummy;
                    lt.soc_req = 0.0;
                }
            } else {
                lt.label = dummy;
                lt.soc_req = 0.0;
            }
            result.labeled.push_back(std::move(lt));
        }
        g = h;
    }
    return result;
}

double charging_demand(double soc_req, const ChargerParams& params) {
    validate(params);
    if (soc_req > 0.0) return soc_req / 100.0 * params.cap_kwh;
    return 0.0; // a non-positive requirement is the no-charge case, not an error
}

double charging_duration(double cd_kwh, const ChargerParams& params) {
    validate(params);
    if (cd_kwh < 0.0) throw ModelError("charging_duration: cd_kwh must be non-negative");
    return cd_kwh / (params.alpha_kw * params.eta);
}

std::vector<ChargingEvent> to_events(std::span<const LabeledTrip> labeled,
                                     const ChargerParams& params, int zone_count) {
    validate(params);
    if (zone_count <= 0) throw ConfigError("zone_count must be positive");
    std::vector<ChargingEvent> events;
    for (const LabeledTrip& lt : labeled) {
        if (lt.label < 1 || lt.label > zone_count) continue;
        ChargingEvent ev;
        ev.vehicle_id = lt.trip.vehicle_id;
        ev.day_index = lt.trip.day_index;
        ev.trip_no = lt.trip.trip_no;
        ev.zone = lt.label;
        ev.start_h = lt.trip.t_end;
        ev.cd_kwh = charging_demand(lt.soc_req, params);
        ev.duration_h = charging_duration(ev.cd_kwh, params);
        events.push_back(ev);
    }
    return events;
}

std::string labeled_to_csv(std::span<const LabeledTrip> labeled) {
    std::ostringstream ss;
    CsvWriter w(ss);
    w.row({"vehicle_id", "trip_no", "t_start", "t_end", "origin_lat", "origin_lon",
           "label", "soc_dep", "soc_req"});
    for (const LabeledTrip& lt : labeled) {
        const Trip& t = lt.trip;
        w.row({std::to_string(t.vehicle_id), std::to_string(t.trip_no),
               format_double(t.t_start), format_double(t.t_end),
               format_double(t.origin.lat), format_double(t.origin.lon),
               std::to_string(lt.label),
               t.soc_dep ? format_double(*t.soc_dep) : std::string(),
               format_double(lt.soc_req)});
    }
    return ss.str();
}

} // namespace evdemand
