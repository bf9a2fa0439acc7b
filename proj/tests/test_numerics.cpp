#include "doctest.h"
#include "helpers.hpp"

#include "staypoint/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace staypoint;

namespace {

std::vector<double> map_values(const std::vector<double>& x, double (*f)(double))
{
    std::vector<double> y;
    for (double v : x)
        y.push_back(f(v));
    return y;
}

// Lagrange basis derivatives of the quadratic through three nodes, evaluated
// at node `at`. Written out from the basis polynomials, not from divided
// differences.
double lagrange_d1(const double (&x)[3], const double (&y)[3], double at)
{
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        sum += y[i] * ((at - x[j]) + (at - x[k])) / ((x[i] - x[j]) * (x[i] - x[k]));
    }
    return sum;
}

double lagrange_d2(const double (&x)[3], const double (&y)[3])
{
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        sum += 2.0 * y[i] / ((x[i] - x[j]) * (x[i] - x[k]));
    }
    return sum;
}

std::vector<ZeroCrossingRegion> naive_regions(const std::vector<double>& d2, double tol)
{
    std::vector<ZeroCrossingRegion> out;
    if (std::all_of(d2.begin(), d2.end(), [&](double v) { return std::abs(v) <= tol; }))
        return out;
    for (std::size_t a = 0; a < d2.size();) {
        if (d2[a] > tol) {
            ++a;
            continue;
        }
        std::size_t b = a;
        while (b + 1 < d2.size() && d2[b + 1] <= tol)
            ++b;
        out.push_back({a, b});
        a = b + 1;
    }
    return out;
}

std::vector<double> random_grid(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> gap(0.05, 30.0);
    std::vector<double> x{std::uniform_real_distribution<double>(0, 100)(rng)};
    while (x.size() < n)
        x.push_back(x.back() + gap(rng));
    return x;
}

} // namespace

TEST_CASE("first derivative examples")
{
    const std::vector<double> x{0, 3, 7, 12};
    const auto d = first_derivative(x, map_values(x, [](double v) { return 2 * v; }));
    CHECK(d == std::vector<double>{2, 2, 2, 2});

    const std::vector<double> q{0, 1, 2.5, 4};
    const auto dq = first_derivative(q, map_values(q, [](double v) { return v * v; }));
    const std::vector<double> expected{0, 2, 5, 8};
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(dq[i] - expected[i]) < 1e-9);

    const auto flat = first_derivative(x, std::vector<double>(4, 7.5));
    CHECK(flat == std::vector<double>(4, 0.0));

    const std::vector<double> two{1, 3};
    CHECK(first_derivative(two, std::vector<double>{0, 4}) == std::vector<double>{2, 2});
}

TEST_CASE("second derivative examples")
{
    const std::vector<double> x{0, 0.5, 2, 2.25, 9};
    for (double v : second_derivative(x, map_values(x, [](double t) { return t * t; })))
        CHECK(std::abs(v - 2.0) < 1e-9);
    for (double v : second_derivative(x, map_values(x, [](double t) { return 2 * t; })))
        CHECK(std::abs(v) < 1e-9);
    const std::vector<double> three{0, 1, 3};
    for (double v : second_derivative(three, map_values(three, [](double t) { return t * t; })))
        CHECK(std::abs(v - 2.0) < 1e-9);
    const std::vector<double> two{0, 1};
    CHECK(second_derivative(two, std::vector<double>{0, 5}) == std::vector<double>{0, 0});
}

TEST_CASE("insufficient points")
{
    const std::vector<double> one{1.0};
    CHECK_THROWS_WITH_AS(first_derivative(one, one), "insufficient points", std::invalid_argument);
    CHECK_THROWS_WITH_AS(second_derivative(one, one), "insufficient points", std::invalid_argument);
    CHECK_THROWS_AS(first_derivative(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(first_derivative(std::vector<double>{0, 1}, std::vector<double>{0}), std::invalid_argument);
}

TEST_CASE("property: three-point stencils match Lagrange differentiation")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> val(-5, 5);
    for (int i = 0; i < 2000; ++i) {
        const auto g = random_grid(rng, 3);
        const double x[3]{g[0], g[1], g[2]};
        const double y[3]{val(rng), val(rng), val(rng)};
        const double scale = 1.0 + std::abs(lagrange_d1(x, y, x[0])) + std::abs(lagrange_d1(x, y, x[2]));
        CHECK(std::abs(stencil::left_first(x[0], x[1], x[2], y[0], y[1], y[2]) - lagrange_d1(x, y, x[0])) < 1e-9 * scale);
        CHECK(std::abs(stencil::central_first(x[0], x[1], x[2], y[0], y[1], y[2]) - lagrange_d1(x, y, x[1])) < 1e-9 * scale);
        CHECK(std::abs(stencil::right_first(x[0], x[1], x[2], y[0], y[1], y[2]) - lagrange_d1(x, y, x[2])) < 1e-9 * scale);
        const double d2 = lagrange_d2(x, y);
        CHECK(std::abs(stencil::second(x[0], x[1], x[2], y[0], y[1], y[2]) - d2) < 1e-9 * (1.0 + std::abs(d2)));
    }
}

TEST_CASE("property: four-point endpoint stencils are exact on cubics")
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> coef(-0.01, 0.01);
    for (int i = 0; i < 1000; ++i) {
        const auto g = random_grid(rng, 4);
        const double a = coef(rng) * 0.01, b = coef(rng), c = coef(rng) * 100;
        auto f2 = [&](double t) { return 6 * a * t + 2 * b; };
        const double x[4]{g[0], g[1], g[2], g[3]};
        double y[4];
        for (int k = 0; k < 4; ++k)
            y[k] = a * x[k] * x[k] * x[k] + b * x[k] * x[k] + c * x[k];
        const double tol = 1e-8 * (1.0 + std::abs(f2(x[0])) + std::abs(f2(x[3])));
        CHECK(std::abs(stencil::left_second(x, y) - f2(x[0])) < tol);
        CHECK(std::abs(stencil::right_second(x, y) - f2(x[3])) < tol);
    }
}

TEST_CASE("derivatives() agrees with the separate passes")
{
    std::mt19937_64 rng(31);
    for (int round = 0; round < 200; ++round) {
        const auto curve = to_spatial_curve(test::random_track(rng, 2 + rng() % 50));
        const auto ds = derivatives(curve);
        CHECK(ds.d1 == first_derivative(curve));
        CHECK(ds.d2 == second_derivative(curve));
        CHECK(ds.d1_min == *std::min_element(ds.d1.begin(), ds.d1.end()));
    }
}

TEST_CASE("tolerant sign")
{
    CHECK(tolerant_sign(1e-9) == 0);
    CHECK(tolerant_sign(-1e-9) == 0);
    CHECK(tolerant_sign(2e-9) == 1);
    CHECK(tolerant_sign(-2e-9) == -1);
    CHECK(tolerant_sign(0.5, 1.0) == 0);
}

TEST_CASE("zero crossing examples")
{
    CHECK(zero_crossing_regions(std::vector<double>{0, 0, 0, 0}).empty());
    CHECK(zero_crossing_regions(std::vector<double>{1, -1, -1, 1}) == std::vector<ZeroCrossingRegion>{{1, 2}});
    CHECK(zero_crossing_regions(std::vector<double>{1, -1}) == std::vector<ZeroCrossingRegion>{{1, 1}});
    CHECK(zero_crossing_regions(std::vector<double>{-1, 0, 1, 0, 1}) ==
          std::vector<ZeroCrossingRegion>{{0, 1}, {3, 3}});
    CHECK(zero_crossing_regions(std::vector<double>{}).empty());
    CHECK(zero_crossing_regions(std::vector<double>{1, 2, 3}).empty());
}

TEST_CASE("property: regions match a direct scan and are disjoint and sorted")
{
    std::mt19937_64 rng(37);
    std::uniform_int_distribution<int> pick(0, 4);
    const double values[]{-1.0, -1e-10, 0.0, 1e-10, 1.0};
    for (int round = 0; round < 3000; ++round) {
        std::vector<double> d2(rng() % 20);
        for (auto& v : d2)
            v = values[pick(rng)];
        const auto regions = zero_crossing_regions(d2);
        CHECK(regions == naive_regions(d2, kZeroTolerance));
        for (std::size_t r = 0; r < regions.size(); ++r) {
            CHECK(regions[r].i <= regions[r].j);
            CHECK(regions[r].j < d2.size());
            if (r > 0)
                CHECK(regions[r - 1].j + 1 < regions[r].i);
        }
    }
}

TEST_CASE("property: d1 non-negative on noise-free monotone uniform grids")
{
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> step(0.0, 2.0);
    for (int round = 0; round < 500; ++round) {
        std::vector<double> x, y{0.0};
        const std::size_t n = 2 + rng() % 30;
        for (std::size_t i = 0; i < n; ++i)
            x.push_back(480.0 + 2.0 * i);
        while (y.size() < n)
            y.push_back(y.back() + (rng() % 3 == 0 ? 0.0 : step(rng)));
        // One-sided endpoint stencils can undershoot at a stop edge; interior
        // values are plain central differences here.
        const auto d1 = first_derivative(x, y);
        for (std::size_t i = 1; i + 1 < n; ++i)
            CHECK(d1[i] >= -1e-12);
    }
}
