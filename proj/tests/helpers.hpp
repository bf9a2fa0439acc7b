#pragma once

#include "staypoint/curve_transform.hpp"
#include "staypoint/trajectory_io.hpp"

#include <chrono>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace staypoint::test {

inline constexpr Date kDay{std::chrono::year{2024}, std::chrono::month{3}, std::chrono::day{5}};

inline Timestamp at_minute(double minute, Date day = kDay)
{
    const auto ms = static_cast<std::int64_t>(minute * 60'000.0 + (minute >= 0 ? 0.5 : -0.5));
    return std::chrono::sys_days{day} + std::chrono::milliseconds{ms};
}

/// Degrees of longitude on the equator spanning `km`.
inline double equator_degrees(double km)
{
    return km / (kEarthRadiusKm * std::numbers::pi / 180.0);
}

/// Samples on the equator; each pair is (local minute, km east of 0,0).
inline Trajectory equator_track(const std::vector<std::pair<double, double>>& points, Date day = kDay)
{
    Trajectory t;
    t.day = day;
    for (const auto& [minute, km] : points) {
        LocationSample s;
        s.timestamp = at_minute(minute, day);
        s.latitude = 0.0;
        s.longitude = equator_degrees(km);
        t.samples.push_back(s);
    }
    return t;
}

/// Drive 10 min at 1 km/min, stop 20 min (minutes 10..30), drive 10 min; one fix per minute
/// from 08:00.
inline Trajectory move_stay_move()
{
    std::vector<std::pair<double, double>> pts;
    double km = 0.0;
    for (int m = 0; m <= 40; ++m) {
        if (m <= 10)
            km = m;
        else if (m >= 30)
            km = 10.0 + (m - 30);
        pts.emplace_back(480.0 + m, km);
    }
    return equator_track(pts);
}

/// Random walk with stops; strictly increasing times within one day.
inline Trajectory random_track(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> gap(0.2, 8.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::pair<double, double>> pts;
    double minute = 300.0 + 100.0 * unit(rng);
    double km = 0.0;
    bool moving = true;
    for (std::size_t i = 0; i < n && minute < 1400.0; ++i) {
        pts.emplace_back(minute, km);
        if (unit(rng) < 0.15)
            moving = !moving;
        const double dt = gap(rng);
        minute += dt;
        if (moving)
            km += dt * (0.2 + 1.2 * unit(rng));
        else if (unit(rng) < 0.3)
            km += 0.005 * unit(rng);
    }
    return equator_track(pts);
}

} // namespace staypoint::test
