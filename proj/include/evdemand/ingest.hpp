#pragma once

#include "evdemand/geo.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace evdemand {

enum class Powertrain { Icev, Hev, PhevEv };

std::string to_string(Powertrain p);

// Maps a vehicle-type string from the static table to a powertrain class.
// Recognized (case-insensitive): ICE, ICEV, GAS -> Icev; HEV, HYBRID -> Hev;
// PHEV, EV, BEV, PHEV/EV -> PhevEv. Unknown strings yield nullopt.
std::optional<Powertrain> powertrain_from_string(std::string_view type);

// One timestamped GPS/SOC sample of one vehicle trip.
struct RawRecord {
    double day_num = 0.0;           // fractional day of year, > 0
    std::int64_t vehicle_id = 0;
    std::int64_t trip_no = 0;
    std::int64_t timestamp_ms = 0;  // ms elapsed within the trip, >= 0
    std::optional<GeoPoint> gps;    // absent when the row has no usable fix
    std::optional<double> soc_pct;  // [0, 100]; absent for ICEV rows
};

struct VehicleInfo {
    std::int64_t vehicle_id = 0;
    Powertrain powertrain = Powertrain::Icev;
};

// Logical field -> column header. Defaults match the public VED headers.
struct DynamicSchema {
    std::string day_num = "DayNum";
    std::string vehicle_id = "VehId";
    std::string trip_no = "Trip";
    std::string timestamp_ms = "Timestamp(ms)";
    std::string lat = "Latitude[deg]";
    std::string lon = "Longitude[deg]";
    std::string soc = "HV Battery SOC[%]";
};

struct StaticSchema {
    std::string vehicle_id = "VehId";
    std::string vehicle_type = "Vehicle Type";
};

// Parses the dynamic trajectory table. Header row is mandatory; rows keep
// file order. Empty or NaN SOC cells yield an absent soc_pct; a row missing
// either coordinate yields an absent gps. Malformed numerics and bound
// violations throw DataError naming the line and column.
std::vector<RawRecord> parse_dynamic(std::istream& in, const DynamicSchema& schema = {});
std::vector<RawRecord> parse_dynamic_text(std::string_view text, const DynamicSchema& schema = {});

struct StaticParseResult {
    std::vector<VehicleInfo> vehicles;
    std::vector<std::string> rejects; // one line per skipped row (unknown type)
};

// Parses the static vehicle table. Rows with an unrecognized type string are
// skipped and reported; duplicate vehicle ids throw DataError.
StaticParseResult parse_static(std::istream& in, const StaticSchema& schema = {});
StaticParseResult parse_static_text(std::string_view text, const StaticSchema& schema = {});

struct FilterResult {
    std::vector<RawRecord> records;              // order preserved
    std::size_t dropped_unknown_vehicle = 0;     // records with no static entry
};

FilterResult filter_by_powertrain(std::span<const RawRecord> records,
                                  std::span<const VehicleInfo> infos,
                                  const std::set<Powertrain>& wanted);

// Inverses of the parsers; parse(serialize(x)) == x for valid inputs.
std::string serialize_dynamic(std::span<const RawRecord> records, const DynamicSchema& schema = {});
std::string serialize_static(std::span<const VehicleInfo> vehicles, const StaticSchema& schema = {});

} // namespace evdemand
