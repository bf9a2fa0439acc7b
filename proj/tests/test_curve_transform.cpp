#include "doctest.h"
#include "helpers.hpp"

#include "staypoint/curve_transform.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace staypoint;

namespace {

// Central angle from the vector cross/dot form, independent of the
// haversine formulation.
double vector_distance_km(GeoPoint a, GeoPoint b)
{
    const double d = std::numbers::pi / 180.0;
    const double ax = std::cos(a.latitude * d) * std::cos(a.longitude * d);
    const double ay = std::cos(a.latitude * d) * std::sin(a.longitude * d);
    const double az = std::sin(a.latitude * d);
    const double bx = std::cos(b.latitude * d) * std::cos(b.longitude * d);
    const double by = std::cos(b.latitude * d) * std::sin(b.longitude * d);
    const double bz = std::sin(b.latitude * d);
    const double cx = ay * bz - az * by;
    const double cy = az * bx - ax * bz;
    const double cz = ax * by - ay * bx;
    const double dot = ax * bx + ay * by + az * bz;
    return 6371.0088 * std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

} // namespace

TEST_CASE("haversine examples")
{
    CHECK(haversine_km({35.0, 33.0}, {35.0, 33.0}) == 0.0);
    CHECK(std::abs(haversine_km({0, 0}, {0, 1}) - 111.195) < 1e-3);
    const double oracle = vector_distance_km({35.0, 33.0}, {35.0, 33.01});
    CHECK(std::abs(haversine_km({35.0, 33.0}, {35.0, 33.01}) - oracle) < 1e-3 * oracle);
}

TEST_CASE("property: haversine agrees with the vector oracle, symmetric, non-negative")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> lat(-89.0, 89.0), lon(-180.0, 180.0), small(-0.05, 0.05);
    for (int i = 0; i < 2000; ++i) {
        const GeoPoint a{lat(rng), lon(rng)};
        const GeoPoint b = i % 2 ? GeoPoint{lat(rng), lon(rng)} : GeoPoint{a.latitude + small(rng), a.longitude + small(rng)};
        const double h = haversine_km(a, b);
        CHECK(h >= 0.0);
        CHECK(h == haversine_km(b, a));
        CHECK(std::abs(h - vector_distance_km(a, b)) <= 1e-9 * 6371.0 + 1e-6 * h);
    }
}

TEST_CASE("curve examples")
{
    CHECK(to_spatial_curve(Trajectory{}).empty());

    auto one = to_spatial_curve(test::equator_track({{480, 0}}));
    REQUIRE(one.size() == 1);
    CHECK(one.points[0].x == 480.0);
    CHECK(one.points[0].y == 0.0);
    CHECK(one.day == test::kDay);

    auto flat = to_spatial_curve(test::equator_track({{480, 3}, {490, 3}}));
    REQUIRE(flat.size() == 2);
    CHECK(flat.points[1].x == 490.0);
    CHECK(flat.points[1].y == 0.0);

    // Three fixes 1 km apart along a meridian at 35N.
    Trajectory t;
    t.day = test::kDay;
    const double dlat = 1.0 / (kEarthRadiusKm * std::numbers::pi / 180.0);
    for (int i = 0; i < 3; ++i)
        t.samples.push_back({test::at_minute(480 + 10 * i), std::chrono::minutes{0}, 35.0 + i * dlat, 33.0});
    const auto c = to_spatial_curve(t);
    REQUIRE(c.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(c.points[i].x == 480.0 + 10 * i);
        CHECK(c.points[i].y == doctest::Approx(i).epsilon(1e-9));
        CHECK(c.points[i].source_index == std::size_t(i));
    }
}

TEST_CASE("fractional minutes and offsets")
{
    Trajectory t;
    t.samples.push_back({test::at_minute(60.5), std::chrono::minutes{120}, 0, 0});
    t.samples.push_back({test::at_minute(61.0), std::chrono::minutes{60}, 0, 0});
    const auto c = to_spatial_curve(t);
    CHECK(c.points[0].x == 180.5);
    CHECK(c.points[1].x == 181.0);
}

TEST_CASE("non-increasing timestamps are rejected")
{
    CHECK_THROWS_AS(to_spatial_curve(test::equator_track({{480, 0}, {480, 1}})), std::invalid_argument);
    CHECK_THROWS_AS(to_spatial_curve(test::equator_track({{480, 0}, {479, 1}})), std::invalid_argument);
}

TEST_CASE("property: monotone, bijective and translation invariant")
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> shift(-200, 200);
    for (int round = 0; round < 200; ++round) {
        auto t = test::random_track(rng, 2 + rng() % 80);
        const auto c = to_spatial_curve(t);
        REQUIRE(c.size() == t.samples.size());
        CHECK(c.points[0].y == 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            CHECK(c.points[i].source_index == i);
            if (i > 0) {
                CHECK(c.points[i].x > c.points[i - 1].x);
                CHECK(c.points[i].y >= c.points[i - 1].y);
            }
        }

        const int s = shift(rng);
        if (c.points.front().x + s < 0 || c.points.back().x + s >= 1440)
            continue;
        for (auto& sample : t.samples)
            sample.timestamp += std::chrono::minutes{s};
        const auto shifted = to_spatial_curve(t);
        for (std::size_t i = 0; i < c.size(); ++i) {
            CHECK(shifted.points[i].x == doctest::Approx(c.points[i].x + s).epsilon(1e-12));
            CHECK(shifted.points[i].y == c.points[i].y);
        }
    }
}
