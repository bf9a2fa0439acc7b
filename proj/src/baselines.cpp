#include "staypoint/baselines.hpp"

#include "staypoint/curve_transform.hpp"

#include <stdexcept>

namespace staypoint {

void ThresholdConfig::validate() const
{
    if (!(distance_m > 0.0))
        throw std::invalid_argument("distance_m must be positive");
    if (!(time_min > 0.0))
        throw std::invalid_argument("time_min must be positive");
}

std::vector<StayPoint> threshold_detect(const Trajectory& trajectory, const ThresholdConfig& cfg)
{
    cfg.validate();
    std::vector<StayPoint> out;
    const auto& s = trajectory.samples;
    const std::size_t n = s.size();
    if (n == 0)
        return out;

    const Timestamp midnight = local_midnight(s.front());
    const double limit_km = cfg.distance_m / 1000.0;

    std::size_t a = 0;
    while (a < n) {
        std::size_t end = a + 1;
        while (end < n && haversine_km(position(s[a]), position(s[end])) <= limit_km)
            ++end;
        const std::size_t last = end - 1;
        const double start_min = minutes_between(midnight, s[a].timestamp);
        const double end_min = minutes_between(midnight, s[last].timestamp);
        if (end_min - start_min < cfg.time_min) {
            ++a;
            continue;
        }

        double lat = 0.0;
        double lon = 0.0;
        for (std::size_t t = a; t <= last; ++t) {
            lat += s[t].latitude;
            lon += s[t].longitude;
        }
        const auto count = static_cast<double>(last - a + 1);

        StayPoint sp;
        sp.day = trajectory.day;
        sp.first_index = a;
        sp.last_index = last;
        sp.start_minute = start_min;
        sp.end_minute = end_min;
        sp.estimated_duration_min = end_min - start_min;
        sp.latitude = lat / count;
        sp.longitude = lon / count;
        sp.confidence = 100.0;
        sp.cls = StayClass::Stay;
        out.push_back(sp);
        a = end;
    }
    return out;
}

} // namespace staypoint
