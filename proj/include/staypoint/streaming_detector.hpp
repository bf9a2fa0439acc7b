#pragma once

#include "staypoint/detector.hpp"
#include "staypoint/trajectory_io.hpp"

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

namespace staypoint {

/// Online stay-point detector. Samples are pushed in time order; stay-point
/// records are returned as soon as they can no longer change. The minimum
/// speed is fixed to `d1_min_floor`, so for every day the concatenated
/// output of push() and flush() equals detect() run with
/// MinSpeedMode::Constant.
///
/// A derivative value is final once its stencil is complete (the right
/// neighbour for interior points, four points for the first one). A stay
/// is held back while a later fragment of the same stop could still be
/// merged into it. Records are also held while the day's total
/// displacement is below the stationary-day limit, because the whole day may
/// still collapse into a single stay.
///
/// One instance per stream; not safe for concurrent use.
class StreamingDetector {
public:
    explicit StreamingDetector(DetectorConfig cfg = {});

    /// Throws std::invalid_argument if the sample is older than the last one
    /// pushed; the detector is left unchanged in that case. A sample with the
    /// same timestamp as the previous one is ignored. A sample on a new local
    /// day flushes the current day first.
    std::vector<StayPoint> push(const LocationSample& sample);

    /// Closes the current day and resets for the next one.
    std::vector<StayPoint> flush();

    /// Curve points currently buffered.
    std::size_t retained_points() const { return window_.size(); }
    std::size_t emitted() const { return emitted_; }
    std::optional<Date> current_day() const { return day_; }
    const DetectorConfig& config() const { return cfg_; }

private:
    struct Point {
        CurvePoint curve;
        double latitude = 0.0;
        double longitude = 0.0;
        double d1 = 0.0;
        double d2 = 0.0;
        double confidence = 0.0;
    };

    struct Span {
        std::size_t k = 0;
        std::size_t w = 0;
        double value = 0.0;
        StayClass cls = StayClass::Inflection;
    };

    Point& at(std::size_t index) { return window_[index - base_]; }
    const Point& at(std::size_t index) const { return window_[index - base_]; }

    void start_day(const LocationSample& sample);
    void reset_day();
    void set_derivatives(std::size_t index, double d1, double d2);
    void finalize_interior(std::size_t index);
    void finalize_first();
    void finalize_last();
    void scan_through(std::size_t limit, std::vector<StayPoint>& out);
    void scan(std::size_t index, std::vector<StayPoint>& out);
    void close_region(std::size_t i, std::size_t j, std::vector<StayPoint>& out);
    StayPoint make_record(const Span& span) const;
    void emit(StayPoint record, std::vector<StayPoint>& out);
    void release_pending(std::vector<StayPoint>& out);
    void trim();

    DetectorConfig cfg_;
    std::optional<Timestamp> last_timestamp_;
    std::size_t emitted_ = 0;

    // Per-day state.
    std::optional<Date> day_;
    Timestamp midnight_{};
    double first_x_ = 0.0;
    double lat_sum_ = 0.0;
    double lon_sum_ = 0.0;
    std::deque<Point> window_;
    std::size_t base_ = 0;
    std::size_t count_ = 0;
    std::size_t scanned_ = 0;
    bool any_nonzero_ = false;
    std::optional<std::size_t> open_start_;
    std::optional<Span> pending_;
    bool displaced_ = false;
    std::vector<StayPoint> held_;
};

} // namespace staypoint
