#include "evdemand/demand.hpp"

#include "evdemand/csv.hpp"
#include "evdemand/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace evdemand {

using nlohmann::json;

namespace {

double mod24(double t) {
    double m = std::fmod(t, 24.0);
    if (m < 0.0) m += 24.0;
    return m == 24.0 ? 0.0 : m;
}

} // namespace

DemandProfile aggregate(std::span<const ChargingEvent> events, int zone_count,
                        const ChargerParams& params, const DemandOptions& opt) {
    validate(params);
    if (zone_count <= 0) throw ConfigError("aggregate: zone_count must be positive");

    DemandProfile profile;
    profile.zone_count = zone_count;
    profile.event_count = events.size();
    profile.grid_side = opt.grid_side;
    profile.impulse = opt.impulse;
    profile.zones = Matrix(static_cast<std::size_t>(zone_count), 24);
    profile.total.assign(24, 0.0);

    for (const ChargingEvent& ev : events) {
        if (ev.zone < 1 || ev.zone > zone_count)
            throw DataError("aggregate: event zone outside the grid");
        if (ev.cd_kwh < 0.0 || ev.duration_h < 0.0)
            throw DataError("aggregate: negative event energy or duration");
        const std::size_t z = static_cast<std::size_t>(ev.zone - 1);
        const double energy = opt.grid_side ? ev.cd_kwh / params.eta : ev.cd_kwh;
        if (energy == 0.0) continue;

        double t = mod24(ev.start_h);
        if (opt.impulse || ev.duration_h == 0.0) {
            profile.zones.at(z, static_cast<std::size_t>(t)) += energy;
            continue;
        }
        // Spread over [start, start + duration) proportionally to each hour
        // bin's overlap; the final segment takes the exact remainder so the
        // bins sum back to the event energy bit-for-bit.
        double remaining = ev.duration_h;
        double deposited = 0.0;
        while (true) {
            double boundary = std::floor(t) + 1.0;
            double seg = boundary - t;
            if (seg >= remaining) {
                profile.zones.at(z, static_cast<std::size_t>(t)) += energy - deposited;
                break;
            }
            double share = energy * (seg / ev.duration_h);
            profile.zones.at(z, static_cast<std::size_t>(t)) += share;
            deposited += share;
            remaining -= seg;
            t = boundary;
            if (t >= 24.0) t = 0.0;
        }
    }

    for (std::size_t h = 0; h < 24; ++h) {
        double s = 0.0;
        for (std::size_t z = 0; z < profile.zones.rows; ++z) s += profile.zones.at(z, h);
        profile.total[h] = s;
    }
    return profile;
}

std::vector<ChargingEvent> predict_events(int case_id, const CaseModels& models,
                                          std::span<const DataRow> rows,
                                          std::span<const std::size_t> idx, int zone_count,
                                          const ChargerParams& params) {
    if (case_id != 1 && case_id != 2) throw ConfigError("predict_events: case must be 1 or 2");
    if (models.t_end == nullptr || models.soc_req == nullptr ||
        (case_id == 1 && models.label == nullptr))
        throw ModelError("predict_events: missing model");

    std::vector<ChargingEvent> events;
    for (std::size_t i : idx) {
        const DataRow& row = rows[i];
        int label = case_id == 1 ? models.label->predict_label(row.x) : row.y.label;
        if (label < 1 || label > zone_count) continue;

        double t_end = models.t_end->predict_value(row.x);
        if (t_end < row.x.t_start) t_end = row.x.t_start;
        double soc_req = models.soc_req->predict_value(row.x, label);
        soc_req = std::clamp(soc_req, 0.0, 100.0);

        ChargingEvent ev;
        ev.vehicle_id = row.x.vehicle_id;
        ev.zone = label;
        ev.start_h = t_end;
        ev.cd_kwh = charging_demand(soc_req, params);
        ev.duration_h = charging_duration(ev.cd_kwh, params);
        events.push_back(ev);
    }
    return events;
}

std::vector<ChargingEvent> actual_events(std::span<const DataRow> rows,
                                         std::span<const std::size_t> idx, int zone_count,
                                         const ChargerParams& params) {
    std::vector<ChargingEvent> events;
    for (std::size_t i : idx) {
        const DataRow& row = rows[i];
        if (row.y.label < 1 || row.y.label > zone_count) continue;
        ChargingEvent ev;
        ev.vehicle_id = row.x.vehicle_id;
        ev.zone = row.y.label;
        ev.start_h = row.y.t_end;
        ev.cd_kwh = charging_demand(row.y.soc_req, params);
        ev.duration_h = charging_duration(ev.cd_kwh, params);
        events.push_back(ev);
    }
    return events;
}

std::string demand_to_csv(const DemandProfile& profile) {
    std::ostringstream ss;
    CsvWriter w(ss);
    std::vector<std::string> header = {"hour"};
    for (int z = 1; z <= profile.zone_count; ++z) header.push_back("zone_" + std::to_string(z));
    header.push_back("total");
    w.row(header);
    for (std::size_t h = 0; h < 24; ++h) {
        std::vector<std::string> row = {std::to_string(h)};
        for (std::size_t z = 0; z < profile.zones.rows; ++z)
            row.push_back(format_double(profile.zones.at(z, h)));
        row.push_back(format_double(profile.total[h]));
        w.row(row);
    }
    return ss.str();
}

std::string demand_to_json(const DemandProfile& profile) {
    json zones = json::array();
    for (std::size_t z = 0; z < profile.zones.rows; ++z) {
        json bins = json::array();
        for (std::size_t h = 0; h < 24; ++h) bins.push_back(profile.zones.at(z, h));
        zones.push_back(std::move(bins));
    }
    json j{{"version", 1},
           {"case", profile.case_id},
           {"zone_count", profile.zone_count},
           {"event_count", profile.event_count},
           {"grid_side", profile.grid_side},
           {"impulse_binning", profile.impulse},
           {"zones", std::move(zones)},
           {"total", profile.total}};
    return j.dump(2) + "\n";
}

} // namespace evdemand
