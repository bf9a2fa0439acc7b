#include "staypoint/numerics.hpp"

#include <algorithm>
#include <stdexcept>

namespace staypoint {

namespace stencil {

double central_first(double x0, double x1, double x2, double y0, double y1, double y2)
{
    const double h1 = x1 - x0;
    const double h2 = x2 - x1;
    const double s1 = (y1 - y0) / h1;
    const double s2 = (y2 - y1) / h2;
    return (h2 * s1 + h1 * s2) / (h1 + h2);
}

double left_first(double x0, double x1, double x2, double y0, double y1, double y2)
{
    const double h1 = x1 - x0;
    const double h2 = x2 - x1;
    const double s1 = (y1 - y0) / h1;
    const double s2 = (y2 - y1) / h2;
    return s1 - h1 * (s2 - s1) / (h1 + h2);
}

double right_first(double x0, double x1, double x2, double y0, double y1, double y2)
{
    const double h1 = x1 - x0;
    const double h2 = x2 - x1;
    const double s1 = (y1 - y0) / h1;
    const double s2 = (y2 - y1) / h2;
    return s2 + h2 * (s2 - s1) / (h1 + h2);
}

double second(double x0, double x1, double x2, double y0, double y1, double y2)
{
    const double s1 = (y1 - y0) / (x1 - x0);
    const double s2 = (y2 - y1) / (x2 - x1);
    return 2.0 * (s2 - s1) / (x2 - x0);
}

// Newton divided differences. For nodes a, b, c, d the cubic's second
// derivative at a is 2 f[a,b,c] + 2 f[a,b,c,d] ((a - b) + (a - c)).
double left_second(const double (&x)[4], const double (&y)[4])
{
    const double f01 = (y[1] - y[0]) / (x[1] - x[0]);
    const double f12 = (y[2] - y[1]) / (x[2] - x[1]);
    const double f23 = (y[3] - y[2]) / (x[3] - x[2]);
    const double f012 = (f12 - f01) / (x[2] - x[0]);
    const double f123 = (f23 - f12) / (x[3] - x[1]);
    const double f0123 = (f123 - f012) / (x[3] - x[0]);
    return 2.0 * f012 + 2.0 * f0123 * ((x[0] - x[1]) + (x[0] - x[2]));
}

double right_second(const double (&x)[4], const double (&y)[4])
{
    const double f01 = (y[1] - y[0]) / (x[1] - x[0]);
    const double f12 = (y[2] - y[1]) / (x[2] - x[1]);
    const double f23 = (y[3] - y[2]) / (x[3] - x[2]);
    const double f012 = (f12 - f01) / (x[2] - x[0]);
    const double f123 = (f23 - f12) / (x[3] - x[1]);
    const double f0123 = (f123 - f012) / (x[3] - x[0]);
    return 2.0 * f123 + 2.0 * f0123 * ((x[3] - x[2]) + (x[3] - x[1]));
}

} // namespace stencil

namespace {

void check_input(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("x and y lengths differ");
    if (x.size() < 2)
        throw std::invalid_argument("insufficient points");
}

} // namespace

std::vector<double> first_derivative(std::span<const double> x, std::span<const double> y)
{
    check_input(x, y);
    const std::size_t n = x.size();
    std::vector<double> d1(n);
    if (n == 2) {
        d1[0] = d1[1] = (y[1] - y[0]) / (x[1] - x[0]);
        return d1;
    }
    d1[0] = stencil::left_first(x[0], x[1], x[2], y[0], y[1], y[2]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        d1[i] = stencil::central_first(x[i - 1], x[i], x[i + 1], y[i - 1], y[i], y[i + 1]);
    d1[n - 1] = stencil::right_first(x[n - 3], x[n - 2], x[n - 1], y[n - 3], y[n - 2], y[n - 1]);
    return d1;
}

std::vector<double> second_derivative(std::span<const double> x, std::span<const double> y)
{
    check_input(x, y);
    const std::size_t n = x.size();
    std::vector<double> d2(n, 0.0);
    if (n == 2)
        return d2;
    if (n == 3) {
        std::fill(d2.begin(), d2.end(), stencil::second(x[0], x[1], x[2], y[0], y[1], y[2]));
        return d2;
    }
    d2[0] = stencil::left_second({x[0], x[1], x[2], x[3]}, {y[0], y[1], y[2], y[3]});
    for (std::size_t i = 1; i + 1 < n; ++i)
        d2[i] = stencil::second(x[i - 1], x[i], x[i + 1], y[i - 1], y[i], y[i + 1]);
    d2[n - 1] = stencil::right_second({x[n - 4], x[n - 3], x[n - 2], x[n - 1]},
                                      {y[n - 4], y[n - 3], y[n - 2], y[n - 1]});
    return d2;
}

std::vector<double> first_derivative(const SpatialCurve& curve)
{
    const auto x = curve.xs();
    const auto y = curve.ys();
    return first_derivative(x, y);
}

std::vector<double> second_derivative(const SpatialCurve& curve)
{
    const auto x = curve.xs();
    const auto y = curve.ys();
    return second_derivative(x, y);
}

DerivativeSeries derivatives(const SpatialCurve& curve)
{
    const auto& p = curve.points;
    const std::size_t n = p.size();
    if (n < 4) {
        const auto x = curve.xs();
        const auto y = curve.ys();
        DerivativeSeries out;
        out.d1 = first_derivative(x, y);
        out.d2 = second_derivative(x, y);
        out.d1_min = *std::min_element(out.d1.begin(), out.d1.end());
        return out;
    }

    // One pass over the points; same stencils as the span overloads.
    DerivativeSeries out;
    out.d1.resize(n);
    out.d2.resize(n);
    out.d1[0] = stencil::left_first(p[0].x, p[1].x, p[2].x, p[0].y, p[1].y, p[2].y);
    out.d2[0] = stencil::left_second({p[0].x, p[1].x, p[2].x, p[3].x}, {p[0].y, p[1].y, p[2].y, p[3].y});
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const auto& a = p[i - 1];
        const auto& b = p[i];
        const auto& c = p[i + 1];
        out.d1[i] = stencil::central_first(a.x, b.x, c.x, a.y, b.y, c.y);
        out.d2[i] = stencil::second(a.x, b.x, c.x, a.y, b.y, c.y);
    }
    out.d1[n - 1] = stencil::right_first(p[n - 3].x, p[n - 2].x, p[n - 1].x, p[n - 3].y, p[n - 2].y, p[n - 1].y);
    out.d2[n - 1] = stencil::right_second({p[n - 4].x, p[n - 3].x, p[n - 2].x, p[n - 1].x},
                                          {p[n - 4].y, p[n - 3].y, p[n - 2].y, p[n - 1].y});
    out.d1_min = *std::min_element(out.d1.begin(), out.d1.end());
    return out;
}

int tolerant_sign(double v, double tol)
{
    if (v > tol)
        return 1;
    if (v < -tol)
        return -1;
    return 0;
}

std::vector<ZeroCrossingRegion> zero_crossing_regions(std::span<const double> d2, double tol)
{
    std::vector<ZeroCrossingRegion> regions;
    bool any_nonzero = false;
    bool open = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i < d2.size(); ++i) {
        const int s = tolerant_sign(d2[i], tol);
        any_nonzero = any_nonzero || s != 0;
        if (s > 0) {
            if (open)
                regions.push_back({start, i - 1});
            open = false;
        } else if (!open) {
            open = true;
            start = i;
        }
    }
    if (open && any_nonzero)
        regions.push_back({start, d2.size() - 1});
    return regions;
}

} // namespace staypoint
