#pragma once

#include "staypoint/curve_transform.hpp"
#include "staypoint/numerics.hpp"
#include "staypoint/trajectory_io.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace staypoint {

enum class StayClass { Stay, Candidate, Inflection };

std::string_view to_string(StayClass cls);
/// Throws std::invalid_argument for unknown names.
StayClass stay_class_from_string(std::string_view name);

/// How the minimum speed used by the confidence formula is obtained.
enum class MinSpeedMode {
    Observed,   ///< min over the day's first derivative, floored at d1_min_floor
    Constant,   ///< d1_min_floor itself (real-time mode)
};

struct DetectorConfig {
    double e = 0.05;                    ///< km/min; speeds at or below get full confidence
    double stay_threshold = 80.0;       ///< percent
    double candidate_threshold = 60.0;  ///< percent
    double d1_min_floor = 0.001;        ///< km/min
    double travel_speed_kmh = 50.0;     ///< used for boundary travel time in duration estimates
    MinSpeedMode min_speed_mode = MinSpeedMode::Observed;

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

struct StayPoint {
    Date day{};
    std::size_t first_index = 0;    ///< k, curve index
    std::size_t last_index = 0;     ///< w, curve index
    double start_minute = 0.0;      ///< estimated arrival
    double end_minute = 0.0;        ///< estimated departure
    double estimated_duration_min = 0.0;
    double latitude = 0.0;
    double longitude = 0.0;
    double confidence = 0.0;        ///< percent
    StayClass cls = StayClass::Inflection;

    bool operator==(const StayPoint&) const = default;
};

/// Per-point confidence. `d1_min` must already be floored (non-zero).
/// Full confidence at or below `e`; linear decay scaled by `d1_min` above it;
/// clamped to [0, 100].
double point_confidence(double d1_w, double d1_min, double e);

struct RegionConfidence {
    std::size_t k = 0;
    std::size_t w = 0;
    double value = 0.0;

    bool operator==(const RegionConfidence&) const = default;
};

/// Best mean confidence over all subregions of [i, j]. Because singleton
/// subregions are admissible this is the largest element; the leftmost
/// argmax wins ties. The reported [k, w] is the maximal run around that
/// argmax whose values are all >= min(stay_threshold, value). Linear time.
RegionConfidence region_confidence(std::span<const double> confidences, std::size_t i, std::size_t j,
                                   double stay_threshold = 80.0);

StayClass classify(double value, const DetectorConfig& cfg);

/// Minutes needed to cover `km` at the configured travel speed.
double travel_minutes(double km, const DetectorConfig& cfg);

/// Time spent before p_k and after p_w that is not explained by travelling
/// the adjacent segment at the configured speed.
struct StayBounds {
    double lead = 0.0;
    double core = 0.0;
    double trail = 0.0;

    double duration() const { return core + lead + trail; }
};

StayBounds stay_bounds(const CurvePoint* before, const CurvePoint& first, const CurvePoint& last,
                       const CurvePoint* after, const DetectorConfig& cfg);

/// Core time between p_k and p_w plus the unexplained boundary gaps; a
/// boundary term is omitted when the neighbouring point does not exist.
double estimate_duration(const SpatialCurve& curve, std::size_t k, std::size_t w, const DetectorConfig& cfg);

/// Arithmetic mean of the source samples k..w.
GeoPoint representative_coordinate(const Trajectory& trajectory, std::size_t k, std::size_t w);

/// Everything computed along the way, for curve dumps and diagnostics.
struct DetectionTrace {
    SpatialCurve curve;
    DerivativeSeries derivatives;
    double d1_min_used = 0.0;
    std::vector<double> confidence;
    std::vector<ZeroCrossingRegion> regions;
    std::vector<StayPoint> records;
    bool stationary_day = false;
};

DetectionTrace detect_with_trace(const Trajectory& trajectory, const DetectorConfig& cfg);

/// Full pipeline for one day. Returns records of every class in time order;
/// callers filter by `cls`. Fewer than two samples yield no records.
std::vector<StayPoint> detect(const Trajectory& trajectory, const DetectorConfig& cfg = {});

/// Last index whose confidence counts for `region` on a curve of `n` points.
/// The speed minimum lies between the region's last sample and the one where
/// the second derivative turns positive, so that sample is included too.
std::size_t scored_end(const ZeroCrossingRegion& region, std::size_t n);

/// Displacement below which a whole day counts as a single stay (e x 1 min).
double stationary_day_km(const DetectorConfig& cfg);

} // namespace staypoint
