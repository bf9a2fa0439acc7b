#pragma once

#include "staypoint/trajectory_io.hpp"

#include <cstddef>
#include <vector>

namespace staypoint {

/// Mean Earth radius (IUGG), kilometers.
inline constexpr double kEarthRadiusKm = 6371.0088;

struct GeoPoint {
    double latitude = 0.0;
    double longitude = 0.0;
};

/// Great-circle distance on a sphere of radius kEarthRadiusKm.
double haversine_km(GeoPoint a, GeoPoint b);

inline GeoPoint position(const LocationSample& s) { return {s.latitude, s.longitude}; }

struct CurvePoint {
    double x = 0.0;                 ///< minutes since local midnight
    double y = 0.0;                 ///< cumulative distance, km
    std::size_t source_index = 0;   ///< index into the trajectory's samples
};

/// Displacement-over-time curve of one day: x strictly increasing,
/// y non-decreasing and starting at zero.
struct SpatialCurve {
    Date day{};
    std::vector<CurvePoint> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    std::vector<double> xs() const;
    std::vector<double> ys() const;
};

/// Minutes elapsed from `midnight` to `t`, fractional.
double minutes_between(Timestamp midnight, Timestamp t);

/// Maps each sample to (minutes since midnight, cumulative km). Midnight is
/// taken in the first sample's UTC offset so x stays monotone across offset
/// changes. Throws std::invalid_argument when timestamps are not strictly
/// increasing.
SpatialCurve to_spatial_curve(const Trajectory& trajectory);

} // namespace staypoint
