#include "evdemand/geo.hpp"

#include "evdemand/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace evdemand {

namespace {

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

} // namespace

double haversine_km(GeoPoint a, GeoPoint b) {
    const double phi1 = deg2rad(a.lat);
    const double phi2 = deg2rad(b.lat);
    const double dphi = deg2rad(b.lat - a.lat);
    const double dlam = deg2rad(b.lon - a.lon);

    const double sp = std::sin(dphi / 2.0);
    const double sl = std::sin(dlam / 2.0);
    const double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

BoundingBox fit_bbox(std::span<const GeoPoint> points) {
    if (points.empty()) throw DataError("empty point set");
    BoundingBox box{points[0].lat, points[0].lat, points[0].lon, points[0].lon};
    for (const GeoPoint& p : points) {
        box.lat_min = std::min(box.lat_min, p.lat);
        box.lat_max = std::max(box.lat_max, p.lat);
        box.lon_min = std::min(box.lon_min, p.lon);
        box.lon_max = std::max(box.lon_max, p.lon);
    }
    return box;
}

namespace {

// Cell index along one axis. Half-open cells [lo + k*w, lo + (k+1)*w), so a
// point exactly on an interior gridline lands in the higher cell; the last
// cell is closed at the top. Out-of-range values clamp.
int axis_cell(double v, double lo, double hi, int cells) {
    if (cells <= 1 || hi <= lo) return 0;
    const double w = (hi - lo) / cells;
    const int k = static_cast<int>(std::floor((v - lo) / w));
    return std::clamp(k, 0, cells - 1);
}

} // namespace

int zone_of(const ZoneGrid& grid, GeoPoint p) {
    const int row = axis_cell(p.lat, grid.bbox.lat_min, grid.bbox.lat_max, grid.rows);
    const int col = axis_cell(p.lon, grid.bbox.lon_min, grid.bbox.lon_max, grid.cols);
    return row * grid.cols + col + 1;
}

void validate(const BoundingBox& box) {
    if (box.lat_min > box.lat_max || box.lon_min > box.lon_max) {
        throw ConfigError("invalid bounding box: min exceeds max");
    }
    if (box.lat_min < -90.0 || box.lat_max > 90.0 || box.lon_min < -180.0 || box.lon_max > 180.0) {
        throw ConfigError("bounding box outside valid lat/lon range");
    }
}

void validate(const ZoneGrid& grid) {
    validate(grid.bbox);
    if (grid.rows < 1 || grid.cols < 1) {
        throw ConfigError("zone grid must have at least one row and one column");
    }
}

} // namespace evdemand
