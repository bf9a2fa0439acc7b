#pragma once

#include "staypoint/curve_transform.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace staypoint {

/// Magnitude below which a second-derivative value counts as zero (km/min^2).
inline constexpr double kZeroTolerance = 1e-9;

struct DerivativeSeries {
    std::vector<double> d1;   ///< km/min
    std::vector<double> d2;   ///< km/min^2
    double d1_min = 0.0;      ///< min over d1
};

/// Inclusive index interval of the curve delimited by zero-crossings.
struct ZeroCrossingRegion {
    std::size_t i = 0;
    std::size_t j = 0;

    bool operator==(const ZeroCrossingRegion&) const = default;
};

/// Finite-difference stencils on non-uniform grids. Every function below is
/// exact for polynomials of degree <= 2; the four-point forms are exact up to
/// degree 3. The batch and streaming paths share these so their values agree
/// bit for bit.
namespace stencil {

/// First derivative at the middle node: slope-weighted central difference.
double central_first(double x0, double x1, double x2, double y0, double y1, double y2);
/// First derivative at the left node of a three-node stencil.
double left_first(double x0, double x1, double x2, double y0, double y1, double y2);
/// First derivative at the right node of a three-node stencil.
double right_first(double x0, double x1, double x2, double y0, double y1, double y2);
/// Second derivative of the quadratic through three nodes.
double second(double x0, double x1, double x2, double y0, double y1, double y2);
/// Second derivative at x0 of the cubic through four nodes.
double left_second(const double (&x)[4], const double (&y)[4]);
/// Second derivative at x3 of the cubic through four nodes.
double right_second(const double (&x)[4], const double (&y)[4]);

} // namespace stencil

/// Throws std::invalid_argument("insufficient points") for fewer than two
/// points. Two points yield the plain slope at both ends.
std::vector<double> first_derivative(std::span<const double> x, std::span<const double> y);
std::vector<double> first_derivative(const SpatialCurve& curve);

/// Same preconditions as first_derivative. Fewer than three points yield
/// zeros; exactly three use the single quadratic; otherwise the endpoints use
/// four-point one-sided stencils to keep second-order accuracy.
std::vector<double> second_derivative(std::span<const double> x, std::span<const double> y);
std::vector<double> second_derivative(const SpatialCurve& curve);

DerivativeSeries derivatives(const SpatialCurve& curve);

/// +1, -1, or 0 when |v| <= tol.
int tolerant_sign(double v, double tol = kZeroTolerance);

/// Maximal runs of indices whose second derivative is not positive. Each run
/// is bounded by an upward zero-crossing (or a day boundary) on either side.
/// When every value is numerically zero there is no crossing at all and the
/// result is empty.
std::vector<ZeroCrossingRegion> zero_crossing_regions(std::span<const double> d2, double tol = kZeroTolerance);

} // namespace staypoint
