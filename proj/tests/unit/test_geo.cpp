#include <doctest.h>

#include "evdemand/errors.hpp"
#include "evdemand/geo.hpp"
#include "evdemand/rng.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <vector>

using namespace evdemand;

TEST_CASE("haversine: identical points are at distance zero") {
    CHECK(haversine_km({42.2776, -83.7537}, {42.2776, -83.7537}) == 0.0);
}

TEST_CASE("haversine: one degree of latitude") {
    const double d = haversine_km({42.0, -83.0}, {43.0, -83.0});
    // Along a meridian the great-circle arc is exactly R * pi/180.
    CHECK(d == doctest::Approx(std::numbers::pi / 180.0 * kEarthRadiusKm).epsilon(1e-12));
    CHECK(d == doctest::Approx(111.195).epsilon(1e-5));
}

TEST_CASE("haversine: longitude step shrinks with cos(lat)") {
    const double d = haversine_km({42.2776, -83.7537}, {42.2776, -83.7437});
    CHECK(d == doctest::Approx(0.8228).epsilon(2e-4));
}

TEST_CASE("haversine: symmetric and satisfies the triangle inequality") {
    Rng rng(123);
    for (int i = 0; i < 200; ++i) {
        GeoPoint a{rng.uniform(-80, 80), rng.uniform(-179, 179)};
        GeoPoint b{rng.uniform(-80, 80), rng.uniform(-179, 179)};
        GeoPoint c{rng.uniform(-80, 80), rng.uniform(-179, 179)};
        CHECK(haversine_km(a, b) == haversine_km(b, a));
        const double ab = haversine_km(a, b);
        const double bc = haversine_km(b, c);
        const double ac = haversine_km(a, c);
        CHECK(ac <= (ab + bc) * (1.0 + 1e-9));
    }
}

TEST_CASE("fit_bbox") {
    SUBCASE("singleton") {
        std::vector<GeoPoint> pts = {{1.0, 1.0}};
        BoundingBox b = fit_bbox(pts);
        CHECK(b.lat_min == 1.0);
        CHECK(b.lat_max == 1.0);
        CHECK(b.lon_min == 1.0);
        CHECK(b.lon_max == 1.0);
    }
    SUBCASE("min/max over two points") {
        std::vector<GeoPoint> pts = {{0.0, 0.0}, {2.0, 4.0}};
        BoundingBox b = fit_bbox(pts);
        CHECK(b.lat_min == 0.0);
        CHECK(b.lat_max == 2.0);
        CHECK(b.lon_min == 0.0);
        CHECK(b.lon_max == 4.0);
    }
    SUBCASE("empty input throws") {
        std::vector<GeoPoint> pts;
        CHECK_THROWS_AS(fit_bbox(pts), DataError);
    }
}

namespace {

ZoneGrid unit_grid() { return {{0.0, 3.0, 0.0, 3.0}, 3, 3}; }

} // namespace

TEST_CASE("zone_of: corners, outside clamping, boundary rule") {
    ZoneGrid g = unit_grid();
    CHECK(zone_of(g, {0.5, 0.5}) == 1);  // southwest
    CHECK(zone_of(g, {2.5, 2.5}) == 9);  // northeast
    CHECK(zone_of(g, {-1.0, 1.5}) == 2); // south of the box: lat clamps to row 0
    CHECK(zone_of(g, {5.0, 5.0}) == 9);  // clamped to the northeast corner
    // Interior gridlines belong to the higher-indexed cell.
    CHECK(zone_of(g, {1.0, 0.5}) == 4);
    CHECK(zone_of(g, {0.5, 1.0}) == 2);
    CHECK(zone_of(g, {2.0, 2.0}) == 9);
    // The outer box edge has no higher cell; it stays in the last one.
    CHECK(zone_of(g, {3.0, 3.0}) == 9);
    CHECK(zone_of(g, {0.0, 0.0}) == 1);
}

TEST_CASE("zone_of: constant within open cells, all cells reachable") {
    ZoneGrid g = unit_grid();
    Rng rng(7);
    std::set<int> seen;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            const int expected = r * 3 + c + 1;
            for (int i = 0; i < 20; ++i) {
                GeoPoint p{r + rng.uniform(0.05, 0.95), c + rng.uniform(0.05, 0.95)};
                CHECK(zone_of(g, p) == expected);
            }
            seen.insert(expected);
        }
    }
    CHECK(seen.size() == 9);
}

TEST_CASE("zone_of: lattice check against an independent index computation") {
    ZoneGrid g{{10.0, 20.0, -5.0, 15.0}, 4, 5};
    const double cell_lat = (g.bbox.lat_max - g.bbox.lat_min) / g.rows;
    const double cell_lon = (g.bbox.lon_max - g.bbox.lon_min) / g.cols;
    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c) {
            // Sample strictly inside the open cell so the boundary rule is moot.
            GeoPoint p{g.bbox.lat_min + (r + 0.37) * cell_lat,
                       g.bbox.lon_min + (c + 0.61) * cell_lon};
            CHECK(zone_of(g, p) == r * g.cols + c + 1);
        }
    }
}

TEST_CASE("grid validation rejects degenerate shapes") {
    CHECK_THROWS_AS(validate(BoundingBox{1.0, 0.0, 0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(validate(ZoneGrid{{0.0, 1.0, 0.0, 1.0}, 0, 3}), ConfigError);
    CHECK_NOTHROW(validate(unit_grid()));
}
