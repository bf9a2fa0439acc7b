#include "staypoint/detector.hpp"

#include <algorithm>
#include <stdexcept>

namespace staypoint {

std::string_view to_string(StayClass cls)
{
    switch (cls) {
    case StayClass::Stay:
        return "Stay";
    case StayClass::Candidate:
        return "Candidate";
    case StayClass::Inflection:
        return "Inflection";
    }
    return "Inflection";
}

StayClass stay_class_from_string(std::string_view name)
{
    if (name == "Stay")
        return StayClass::Stay;
    if (name == "Candidate")
        return StayClass::Candidate;
    if (name == "Inflection")
        return StayClass::Inflection;
    throw std::invalid_argument("unknown stay class '" + std::string(name) + "'");
}

void DetectorConfig::validate() const
{
    if (!(e > 0.0))
        throw std::invalid_argument("e must be positive");
    if (!(candidate_threshold >= 0.0 && candidate_threshold < stay_threshold && stay_threshold <= 100.0))
        throw std::invalid_argument("thresholds must satisfy 0 <= candidate < stay <= 100");
    if (!(d1_min_floor > 0.0))
        throw std::invalid_argument("d1_min_floor must be positive");
    if (!(travel_speed_kmh > 0.0))
        throw std::invalid_argument("travel_speed_kmh must be positive");
}

double point_confidence(double d1_w, double d1_min, double e)
{
    if (d1_w <= e)
        return 100.0;
    const double penalty = (d1_w - e) / d1_min;
    if (penalty > 100.0)
        return 0.0;
    return std::clamp(100.0 - penalty, 0.0, 100.0);
}

RegionConfidence region_confidence(std::span<const double> confidences, std::size_t i, std::size_t j,
                                   double stay_threshold)
{
    if (i > j || j >= confidences.size())
        throw std::out_of_range("region_confidence: invalid region");
    std::size_t best = i;
    for (std::size_t t = i + 1; t <= j; ++t)
        if (confidences[t] > confidences[best])
            best = t;
    const double value = confidences[best];
    const double floor = std::min(stay_threshold, value);
    std::size_t k = best;
    while (k > i && confidences[k - 1] >= floor)
        --k;
    std::size_t w = best;
    while (w < j && confidences[w + 1] >= floor)
        ++w;
    return {k, w, value};
}

StayClass classify(double value, const DetectorConfig& cfg)
{
    if (value >= cfg.stay_threshold)
        return StayClass::Stay;
    if (value >= cfg.candidate_threshold)
        return StayClass::Candidate;
    return StayClass::Inflection;
}

double travel_minutes(double km, const DetectorConfig& cfg)
{
    return km / (cfg.travel_speed_kmh / 60.0);
}

StayBounds stay_bounds(const CurvePoint* before, const CurvePoint& first, const CurvePoint& last,
                       const CurvePoint* after, const DetectorConfig& cfg)
{
    StayBounds b;
    b.core = last.x - first.x;
    if (before != nullptr)
        b.lead = std::max(0.0, (first.x - before->x) - travel_minutes(first.y - before->y, cfg));
    if (after != nullptr)
        b.trail = std::max(0.0, (after->x - last.x) - travel_minutes(after->y - last.y, cfg));
    return b;
}

double estimate_duration(const SpatialCurve& curve, std::size_t k, std::size_t w, const DetectorConfig& cfg)
{
    const auto& p = curve.points;
    const CurvePoint* before = k > 0 ? &p[k - 1] : nullptr;
    const CurvePoint* after = w + 1 < p.size() ? &p[w + 1] : nullptr;
    return stay_bounds(before, p[k], p[w], after, cfg).duration();
}

GeoPoint representative_coordinate(const Trajectory& trajectory, std::size_t k, std::size_t w)
{
    double lat = 0.0;
    double lon = 0.0;
    for (std::size_t t = k; t <= w; ++t) {
        lat += trajectory.samples[t].latitude;
        lon += trajectory.samples[t].longitude;
    }
    const auto count = static_cast<double>(w - k + 1);
    return {lat / count, lon / count};
}

std::size_t scored_end(const ZeroCrossingRegion& region, std::size_t n)
{
    return region.j + 1 < n ? region.j + 1 : region.j;
}

double stationary_day_km(const DetectorConfig& cfg)
{
    return cfg.e * 1.0;
}

namespace {

struct Span {
    std::size_t k;
    std::size_t w;
    double value;
    StayClass cls;
};

StayPoint make_record(const Trajectory& trajectory, const SpatialCurve& curve, const Span& span,
                      const DetectorConfig& cfg)
{
    const auto& p = curve.points;
    const CurvePoint* before = span.k > 0 ? &p[span.k - 1] : nullptr;
    const CurvePoint* after = span.w + 1 < p.size() ? &p[span.w + 1] : nullptr;
    const auto bounds = stay_bounds(before, p[span.k], p[span.w], after, cfg);
    const auto where = representative_coordinate(trajectory, p[span.k].source_index, p[span.w].source_index);

    StayPoint sp;
    sp.day = trajectory.day;
    sp.first_index = span.k;
    sp.last_index = span.w;
    sp.start_minute = p[span.k].x - bounds.lead;
    sp.end_minute = p[span.w].x + bounds.trail;
    sp.estimated_duration_min = bounds.duration();
    sp.latitude = where.latitude;
    sp.longitude = where.longitude;
    sp.confidence = span.value;
    sp.cls = span.cls;
    return sp;
}

} // namespace

DetectionTrace detect_with_trace(const Trajectory& trajectory, const DetectorConfig& cfg)
{
    cfg.validate();
    DetectionTrace trace;
    trace.curve = to_spatial_curve(trajectory);
    const auto& curve = trace.curve;
    const std::size_t n = curve.size();
    if (n < 2)
        return trace;

    trace.derivatives = derivatives(curve);
    const auto& d1 = trace.derivatives.d1;
    trace.d1_min_used = cfg.min_speed_mode == MinSpeedMode::Constant
        ? cfg.d1_min_floor
        : std::max(trace.derivatives.d1_min, cfg.d1_min_floor);

    trace.confidence.resize(n);
    for (std::size_t t = 0; t < n; ++t)
        trace.confidence[t] = point_confidence(std::max(d1[t], 0.0), trace.d1_min_used, cfg.e);

    if (curve.points.back().y < stationary_day_km(cfg)) {
        trace.stationary_day = true;
        trace.records.push_back(make_record(trajectory, curve, {0, n - 1, 100.0, StayClass::Stay}, cfg));
        return trace;
    }

    trace.regions = zero_crossing_regions(trace.derivatives.d2);

    std::vector<Span> spans;
    spans.reserve(trace.regions.size());
    for (const auto& region : trace.regions) {
        const auto rc = region_confidence(trace.confidence, region.i, scored_end(region, n), cfg.stay_threshold);
        const Span next{rc.k, rc.w, rc.value, classify(rc.value, cfg)};
        // Consecutive stays separated only by points that are themselves
        // stay-grade are one stop fragmented by second-derivative noise.
        if (!spans.empty() && spans.back().cls == StayClass::Stay && next.cls == StayClass::Stay) {
            auto& prev = spans.back();
            bool joined = true;
            for (std::size_t t = prev.w + 1; t < next.k; ++t)
                if (trace.confidence[t] < cfg.stay_threshold) {
                    joined = false;
                    break;
                }
            if (joined) {
                prev.w = next.w;
                prev.value = std::max(prev.value, next.value);
                continue;
            }
        }
        spans.push_back(next);
    }

    trace.records.reserve(spans.size());
    for (const auto& span : spans)
        trace.records.push_back(make_record(trajectory, curve, span, cfg));
    return trace;
}

std::vector<StayPoint> detect(const Trajectory& trajectory, const DetectorConfig& cfg)
{
    return detect_with_trace(trajectory, cfg).records;
}

} // namespace staypoint
