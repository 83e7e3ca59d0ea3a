#pragma once

#include <span>
#include <vector>

namespace evdemand {

// IUGG mean Earth radius.
inline constexpr double kEarthRadiusKm = 6371.0088;

struct GeoPoint {
    double lat = 0.0; // degrees, [-90, 90]
    double lon = 0.0; // degrees, [-180, 180]
};

struct BoundingBox {
    double lat_min = 0.0;
    double lat_max = 0.0;
    double lon_min = 0.0;
    double lon_max = 0.0;

    bool contains(GeoPoint p) const {
        return p.lat >= lat_min && p.lat <= lat_max && p.lon >= lon_min && p.lon <= lon_max;
    }
};

// Uniform rows x cols partition of a bounding box. Zones are numbered 1..n
// row-major from the southwest corner, west to east then south to north.
struct ZoneGrid {
    BoundingBox bbox;
    int rows = 3;
    int cols = 3;

    int zone_count() const { return rows * cols; }
};

// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(GeoPoint a, GeoPoint b);

// Tightest axis-aligned box containing all points. Throws DataError on an
// empty input.
BoundingBox fit_bbox(std::span<const GeoPoint> points);

// Zone id in 1..n. Points outside the box are clamped to the nearest cell;
// points exactly on an interior gridline belong to the cell with the higher
// index along that axis.
int zone_of(const ZoneGrid& grid, GeoPoint p);

void validate(const BoundingBox& box);
void validate(const ZoneGrid& grid);

} // namespace evdemand
