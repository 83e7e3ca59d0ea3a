#include "evdemand/ingest.hpp"

#include "evdemand/csv.hpp"
#include "evdemand/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace evdemand {

std::string to_string(Powertrain p) {
    switch (p) {
        case Powertrain::Icev: return "ICEV";
        case Powertrain::Hev: return "HEV";
        case Powertrain::PhevEv: return "PHEV_EV";
    }
    return "?";
}

std::optional<Powertrain> powertrain_from_string(std::string_view type) {
    std::string t;
    for (char c : type) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            t += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        }
    }
    if (t == "ICE" || t == "ICEV" || t == "GAS") return Powertrain::Icev;
    if (t == "HEV" || t == "HYBRID") return Powertrain::Hev;
    if (t == "PHEV" || t == "EV" || t == "BEV" || t == "PHEV/EV" || t == "PHEV_EV") {
        return Powertrain::PhevEv;
    }
    return std::nullopt;
}

namespace {

// Column position lookup by header name; missing mandatory columns throw.
std::size_t require_column(const std::vector<std::string>& header,
                           const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw DataError("missing mandatory column '" + name + "' in header");
    }
    return static_cast<std::size_t>(it - header.begin());
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header,
                                       const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
}

bool is_nan_token(std::string_view s) {
    if (s.size() != 3) return false;
    auto lower = [](char c) { return std::tolower(static_cast<unsigned char>(c)); };
    return lower(s[0]) == 'n' && lower(s[1]) == 'a' && lower(s[2]) == 'n';
}

std::string_view cell(const std::vector<std::string>& row, std::size_t idx) {
    return idx < row.size() ? std::string_view(row[idx]) : std::string_view{};
}

double need_double(std::string_view text, std::size_t line, const std::string& column) {
    auto v = parse_double(text);
    if (!v) {
        throw DataError("malformed numeric cell at line " + std::to_string(line) +
                        " column '" + column + "': '" + std::string(text) + "'");
    }
    return *v;
}

std::int64_t need_int(std::string_view text, std::size_t line, const std::string& column) {
    auto v = parse_int(text);
    if (!v) {
        throw DataError("malformed integer cell at line " + std::to_string(line) +
                        " column '" + column + "': '" + std::string(text) + "'");
    }
    return *v;
}

[[noreturn]] void bound_violation(const std::string& field, double value, std::size_t line) {
    throw DataError("field '" + field + "' out of range at line " + std::to_string(line) +
                    ": " + format_double(value));
}

} // namespace

std::vector<RawRecord> parse_dynamic(std::istream& in, const DynamicSchema& schema) {
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw DataError("dynamic table has no header row");

    const std::size_t c_day = require_column(row, schema.day_num);
    const std::size_t c_veh = require_column(row, schema.vehicle_id);
    const std::size_t c_trip = require_column(row, schema.trip_no);
    const std::size_t c_ts = require_column(row, schema.timestamp_ms);
    const std::size_t c_lat = require_column(row, schema.lat);
    const std::size_t c_lon = require_column(row, schema.lon);
    const auto c_soc = find_column(row, schema.soc); // optional: ICEV exports may omit it

    std::vector<RawRecord> out;
    while (reader.next(row)) {
        const std::size_t line = reader.line();
        if (row.size() == 1 && row[0].empty()) continue; // trailing blank line

        RawRecord r;
        r.day_num = need_double(cell(row, c_day), line, schema.day_num);
        if (!(r.day_num > 0.0)) bound_violation(schema.day_num, r.day_num, line);
        r.vehicle_id = need_int(cell(row, c_veh), line, schema.vehicle_id);
        r.trip_no = need_int(cell(row, c_trip), line, schema.trip_no);
        r.timestamp_ms = need_int(cell(row, c_ts), line, schema.timestamp_ms);
        if (r.timestamp_ms < 0) {
            bound_violation(schema.timestamp_ms, static_cast<double>(r.timestamp_ms), line);
        }

        const auto lat_text = cell(row, c_lat);
        const auto lon_text = cell(row, c_lon);
        const bool lat_absent = lat_text.empty() || is_nan_token(lat_text);
        const bool lon_absent = lon_text.empty() || is_nan_token(lon_text);
        if (!lat_absent && !lon_absent) {
            GeoPoint p;
            p.lat = need_double(lat_text, line, schema.lat);
            p.lon = need_double(lon_text, line, schema.lon);
            if (p.lat < -90.0 || p.lat > 90.0) bound_violation("lat", p.lat, line);
            if (p.lon < -180.0 || p.lon > 180.0) bound_violation("lon", p.lon, line);
            r.gps = p;
        }

        if (c_soc) {
            const auto soc_text = cell(row, *c_soc);
            if (!soc_text.empty() && !is_nan_token(soc_text)) {
                const double soc = need_double(soc_text, line, schema.soc);
                if (soc < 0.0 || soc > 100.0) bound_violation("soc_pct", soc, line);
                r.soc_pct = soc;
            }
        }
        out.push_back(r);
    }
    return out;
}

std::vector<RawRecord> parse_dynamic_text(std::string_view text, const DynamicSchema& schema) {
    std::istringstream in{std::string(text)};
    return parse_dynamic(in, schema);
}

StaticParseResult parse_static(std::istream& in, const StaticSchema& schema) {
    CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next(row)) throw DataError("static table has no header row");

    const std::size_t c_veh = require_column(row, schema.vehicle_id);
    const std::size_t c_type = require_column(row, schema.vehicle_type);

    StaticParseResult result;
    std::unordered_set<std::int64_t> seen;
    while (reader.next(row)) {
        const std::size_t line = reader.line();
        if (row.size() == 1 && row[0].empty()) continue;

        const std::int64_t id = need_int(cell(row, c_veh), line, schema.vehicle_id);
        const std::string type(cell(row, c_type));
        const auto powertrain = powertrain_from_string(type);
        if (!powertrain) {
            result.rejects.push_back("line " + std::to_string(line) + ": unknown vehicle type '" +
                                     type + "' (vehicle " + std::to_string(id) + ")");
            continue;
        }
        if (!seen.insert(id).second) {
            throw DataError("duplicate vehicle_id " + std::to_string(id) + " at line " +
                            std::to_string(line));
        }
        result.vehicles.push_back({id, *powertrain});
    }
    return result;
}

StaticParseResult parse_static_text(std::string_view text, const StaticSchema& schema) {
    std::istringstream in{std::string(text)};
    return parse_static(in, schema);
}

FilterResult filter_by_powertrain(std::span<const RawRecord> records,
                                  std::span<const VehicleInfo> infos,
                                  const std::set<Powertrain>& wanted) {
    std::unordered_map<std::int64_t, Powertrain> by_id;
    by_id.reserve(infos.size());
    for (const VehicleInfo& v : infos) by_id.emplace(v.vehicle_id, v.powertrain);

    FilterResult out;
    for (const RawRecord& r : records) {
        auto it = by_id.find(r.vehicle_id);
        if (it == by_id.end()) {
            ++out.dropped_unknown_vehicle;
            continue;
        }
        if (wanted.count(it->second)) out.records.push_back(r);
    }
    return out;
}

std::string serialize_dynamic(std::span<const RawRecord> records, const DynamicSchema& schema) {
    std::ostringstream ss;
    CsvWriter w(ss);
    w.row({schema.day_num, schema.vehicle_id, schema.trip_no, schema.timestamp_ms,
           schema.lat, schema.lon, schema.soc});
    for (const RawRecord& r : records) {
        w.row({format_double(r.day_num), std::to_string(r.vehicle_id),
               std::to_string(r.trip_no), std::to_string(r.timestamp_ms),
               r.gps ? format_double(r.gps->lat) : "",
               r.gps ? format_double(r.gps->lon) : "",
               r.soc_pct ? format_double(*r.soc_pct) : ""});
    }
    return ss.str();
}

std::string serialize_static(std::span<const VehicleInfo> vehicles, const StaticSchema& schema) {
    std::ostringstream ss;
    CsvWriter w(ss);
    w.row({schema.vehicle_id, schema.vehicle_type});
    for (const VehicleInfo& v : vehicles) {
        // Emit the canonical VED-style type strings the parser maps back.
        std::string type;
        switch (v.powertrain) {
            case Powertrain::Icev: type = "ICE"; break;
            case Powertrain::Hev: type = "HEV"; break;
            case Powertrain::PhevEv: type = "EV"; break;
        }
        w.row({std::to_string(v.vehicle_id), type});
    }
    return ss.str();
}

} // namespace evdemand
