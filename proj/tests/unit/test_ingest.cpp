#include <doctest.h>

#include "evdemand/errors.hpp"
#include "evdemand/ingest.hpp"

#include <string>
#include <vector>

using namespace evdemand;

namespace {

const char* kDynHeader = "DayNum,VehId,Trip,Timestamp(ms),Latitude[deg],Longitude[deg],HV Battery SOC[%]\n";

std::string dyn(const std::string& rows) { return std::string(kDynHeader) + rows; }

} // namespace

TEST_CASE("parse_dynamic: sample trajectory row") {
    auto recs = parse_dynamic_text(dyn("5.5602,371,1288,0,42.2776,-83.7537,94.344\n"));
    REQUIRE(recs.size() == 1);
    const RawRecord& r = recs[0];
    CHECK(r.day_num == 5.5602);
    CHECK(r.vehicle_id == 371);
    CHECK(r.trip_no == 1288);
    CHECK(r.timestamp_ms == 0);
    REQUIRE(r.gps.has_value());
    CHECK(r.gps->lat == 42.2776);
    CHECK(r.gps->lon == -83.7537);
    REQUIRE(r.soc_pct.has_value());
    CHECK(*r.soc_pct == 94.344);
}

TEST_CASE("parse_dynamic: header-only file yields no records") {
    CHECK(parse_dynamic_text(kDynHeader).empty());
}

TEST_CASE("parse_dynamic: absent SOC and absent GPS stay absent") {
    auto recs = parse_dynamic_text(dyn("1.5,7,1,0,42.0,-83.0,\n"
                                       "1.5,7,1,100,42.0,-83.0,nan\n"
                                       "1.5,7,1,200,,,50\n"));
    REQUIRE(recs.size() == 3);
    CHECK_FALSE(recs[0].soc_pct.has_value());
    CHECK_FALSE(recs[1].soc_pct.has_value());
    CHECK(recs[0].gps.has_value());
    CHECK_FALSE(recs[2].gps.has_value());
    CHECK(recs[2].soc_pct == 50.0);
}

TEST_CASE("parse_dynamic: bound violations name the field and line") {
    CHECK_THROWS_WITH_AS(parse_dynamic_text(dyn("1.5,7,1,0,91.0,-83.0,\n")).size(),
                         doctest::Contains("lat"), DataError);
    CHECK_THROWS_AS(parse_dynamic_text(dyn("1.5,7,1,0,42.0,-183.0,\n")), DataError);
    CHECK_THROWS_AS(parse_dynamic_text(dyn("1.5,7,1,0,42.0,-83.0,101\n")), DataError);
    CHECK_THROWS_AS(parse_dynamic_text(dyn("-1.5,7,1,0,42.0,-83.0,\n")), DataError);
    CHECK_THROWS_AS(parse_dynamic_text(dyn("1.5,7,1,-5,42.0,-83.0,\n")), DataError);
}

TEST_CASE("parse_dynamic: malformed numerics carry line and column") {
    try {
        parse_dynamic_text(dyn("1.5,7,1,0,42.0,-83.0,\n"
                               "1.5,seven,1,0,42.0,-83.0,\n"));
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("VehId") != std::string::npos);
    }
}

TEST_CASE("parse_dynamic: missing mandatory column is a schema error") {
    CHECK_THROWS_WITH_AS(
        parse_dynamic_text("DayNum,VehId,Trip,Latitude[deg],Longitude[deg]\n").size(),
        doctest::Contains("Timestamp(ms)"), DataError);
}

TEST_CASE("parse_dynamic: custom schema maps alternate headers") {
    DynamicSchema s;
    s.day_num = "day";
    s.vehicle_id = "veh";
    s.trip_no = "trip";
    s.timestamp_ms = "ts";
    s.lat = "lat";
    s.lon = "lon";
    s.soc = "soc";
    auto recs = parse_dynamic_text("day,veh,trip,ts,lat,lon,soc\n2.25,9,4,10,41,-84,55\n", s);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].vehicle_id == 9);
    CHECK(recs[0].soc_pct == 55.0);
}

TEST_CASE("powertrain mapping table") {
    CHECK(powertrain_from_string("PHEV") == Powertrain::PhevEv);
    CHECK(powertrain_from_string("EV") == Powertrain::PhevEv);
    CHECK(powertrain_from_string("bev") == Powertrain::PhevEv);
    CHECK(powertrain_from_string("PHEV/EV") == Powertrain::PhevEv);
    CHECK(powertrain_from_string("ICE") == Powertrain::Icev);
    CHECK(powertrain_from_string("Gas") == Powertrain::Icev);
    CHECK(powertrain_from_string("HEV") == Powertrain::Hev);
    CHECK(powertrain_from_string("Hybrid") == Powertrain::Hev);
    CHECK_FALSE(powertrain_from_string("rocket").has_value());
}

TEST_CASE("parse_static: mapping, rejects, duplicates") {
    SUBCASE("PHEV maps to the EV cohort") {
        auto res = parse_static_text("VehId,Vehicle Type\n371,PHEV\n");
        REQUIRE(res.vehicles.size() == 1);
        CHECK(res.vehicles[0].vehicle_id == 371);
        CHECK(res.vehicles[0].powertrain == Powertrain::PhevEv);
        CHECK(res.rejects.empty());
    }
    SUBCASE("header-only file yields nothing") {
        auto res = parse_static_text("VehId,Vehicle Type\n");
        CHECK(res.vehicles.empty());
    }
    SUBCASE("unknown type is skipped and reported") {
        auto res = parse_static_text("VehId,Vehicle Type\n1,ICE\n2,steamer\n");
        CHECK(res.vehicles.size() == 1);
        REQUIRE(res.rejects.size() == 1);
        CHECK(res.rejects[0].find("steamer") != std::string::npos);
    }
    SUBCASE("duplicate vehicle id throws, naming the id") {
        CHECK_THROWS_WITH_AS(parse_static_text("VehId,Vehicle Type\n5,ICE\n5,HEV\n").vehicles.size(),
                             doctest::Contains("5"), DataError);
    }
}

TEST_CASE("filter_by_powertrain") {
    std::vector<VehicleInfo> infos = {{371, Powertrain::PhevEv}, {12, Powertrain::Icev}};
    std::vector<RawRecord> recs(5);
    recs[0].vehicle_id = 371;
    recs[1].vehicle_id = 12;
    recs[2].vehicle_id = 371;
    recs[3].vehicle_id = 999; // unknown
    recs[4].vehicle_id = 12;

    SUBCASE("single cohort") {
        auto out = filter_by_powertrain(recs, infos, {Powertrain::PhevEv});
        REQUIRE(out.records.size() == 2);
        CHECK(out.records[0].vehicle_id == 371);
        CHECK(out.records[1].vehicle_id == 371);
        CHECK(out.dropped_unknown_vehicle == 1);
    }
    SUBCASE("all powertrains keeps everything known, order preserved") {
        auto out = filter_by_powertrain(
            recs, infos, {Powertrain::PhevEv, Powertrain::Hev, Powertrain::Icev});
        REQUIRE(out.records.size() == 4);
        CHECK(out.records[0].vehicle_id == 371);
        CHECK(out.records[1].vehicle_id == 12);
        CHECK(out.dropped_unknown_vehicle == 1);
    }
    SUBCASE("partition cardinalities sum to input minus drops") {
        std::size_t total = 0;
        for (auto p : {Powertrain::PhevEv, Powertrain::Hev, Powertrain::Icev}) {
            total += filter_by_powertrain(recs, infos, {p}).records.size();
        }
        auto any = filter_by_powertrain(
            recs, infos, {Powertrain::PhevEv, Powertrain::Hev, Powertrain::Icev});
        CHECK(total == recs.size() - any.dropped_unknown_vehicle);
    }
}

TEST_CASE("dynamic serialize/parse round-trip") {
    std::vector<RawRecord> recs(3);
    recs[0] = {5.5602, 371, 1288, 0, GeoPoint{42.2776, -83.7537}, 94.344};
    recs[1] = {5.5602, 371, 1288, 200, GeoPoint{42.2776, -83.7537}, std::nullopt};
    recs[2] = {6.25, 12, 3, 0, std::nullopt, std::nullopt};
    auto back = parse_dynamic_text(serialize_dynamic(recs));
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].day_num == recs[i].day_num);
        CHECK(back[i].vehicle_id == recs[i].vehicle_id);
        CHECK(back[i].trip_no == recs[i].trip_no);
        CHECK(back[i].timestamp_ms == recs[i].timestamp_ms);
        CHECK(back[i].gps.has_value() == recs[i].gps.has_value());
        if (recs[i].gps) {
            CHECK(back[i].gps->lat == recs[i].gps->lat);
            CHECK(back[i].gps->lon == recs[i].gps->lon);
        }
        CHECK(back[i].soc_pct == recs[i].soc_pct);
    }
}

TEST_CASE("static serialize/parse round-trip") {
    std::vector<VehicleInfo> vehicles = {
        {1, Powertrain::PhevEv}, {2, Powertrain::Icev}, {3, Powertrain::Hev}};
    auto back = parse_static_text(serialize_static(vehicles));
    REQUIRE(back.vehicles.size() == vehicles.size());
    CHECK(back.rejects.empty());
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
        CHECK(back.vehicles[i].vehicle_id == vehicles[i].vehicle_id);
        CHECK(back.vehicles[i].powertrain == vehicles[i].powertrain);
    }
}
