#include "staypoint/curve_transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace staypoint {

double haversine_km(GeoPoint a, GeoPoint b)
{
    constexpr double rad = std::numbers::pi / 180.0;
    const double phi1 = a.latitude * rad;
    const double phi2 = b.latitude * rad;
    const double dphi = (b.latitude - a.latitude) * rad;
    const double dlambda = (b.longitude - a.longitude) * rad;
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlambda / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::min(1.0, h)));
}

std::vector<double> SpatialCurve::xs() const
{
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points)
        out.push_back(p.x);
    return out;
}

std::vector<double> SpatialCurve::ys() const
{
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points)
        out.push_back(p.y);
    return out;
}

double minutes_between(Timestamp midnight, Timestamp t)
{
    return std::chrono::duration<double, std::ratio<60>>(t - midnight).count();
}

SpatialCurve to_spatial_curve(const Trajectory& trajectory)
{
    SpatialCurve curve;
    curve.day = trajectory.day;
    const auto& samples = trajectory.samples;
    if (samples.empty())
        return curve;

    const Timestamp midnight = local_midnight(samples.front());
    curve.points.reserve(samples.size());
    double cumulative = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i > 0) {
            if (samples[i].timestamp <= samples[i - 1].timestamp)
                throw std::invalid_argument("to_spatial_curve: timestamps must be strictly increasing");
            cumulative += haversine_km(position(samples[i - 1]), position(samples[i]));
        }
        curve.points.push_back({minutes_between(midnight, samples[i].timestamp), cumulative, i});
    }
    return curve;
}

} // namespace staypoint
