#include "staypoint/streaming_detector.hpp"

#include "staypoint/curve_transform.hpp"
#include "staypoint/numerics.hpp"

#include <algorithm>
#include <stdexcept>

namespace staypoint {

StreamingDetector::StreamingDetector(DetectorConfig cfg)
    : cfg_(cfg)
{
    cfg_.min_speed_mode = MinSpeedMode::Constant;
    cfg_.validate();
}

void StreamingDetector::start_day(const LocationSample& sample)
{
    day_ = local_date(sample);
    midnight_ = local_midnight(sample);
}

void StreamingDetector::reset_day()
{
    day_.reset();
    first_x_ = 0.0;
    lat_sum_ = lon_sum_ = 0.0;
    window_.clear();
    base_ = count_ = scanned_ = 0;
    any_nonzero_ = false;
    open_start_.reset();
    pending_.reset();
    displaced_ = false;
    held_.clear();
}

std::vector<StayPoint> StreamingDetector::push(const LocationSample& sample)
{
    if (last_timestamp_ && sample.timestamp < *last_timestamp_)
        throw std::invalid_argument("StreamingDetector::push: sample older than the previous one");

    std::vector<StayPoint> out;
    if (day_ && local_date(sample) != *day_)
        out = flush();
    else if (last_timestamp_ && sample.timestamp == *last_timestamp_)
        return out;
    last_timestamp_ = sample.timestamp;

    if (!day_)
        start_day(sample);

    Point p;
    p.latitude = sample.latitude;
    p.longitude = sample.longitude;
    p.curve.x = minutes_between(midnight_, sample.timestamp);
    p.curve.source_index = count_;
    if (count_ == 0) {
        first_x_ = p.curve.x;
    } else {
        const auto& prev = at(count_ - 1);
        p.curve.y = prev.curve.y + haversine_km({prev.latitude, prev.longitude}, {p.latitude, p.longitude});
    }
    lat_sum_ += p.latitude;
    lon_sum_ += p.longitude;
    window_.push_back(p);
    ++count_;

    if (!displaced_ && p.curve.y >= stationary_day_km(cfg_)) {
        displaced_ = true;
        for (auto& record : held_)
            emit(std::move(record), out);
        held_.clear();
    }

    if (count_ >= 3)
        finalize_interior(count_ - 2);
    if (count_ == 4)
        finalize_first();
    if (count_ >= 4)
        scan_through(count_ - 1, out);

    trim();
    return out;
}

std::vector<StayPoint> StreamingDetector::flush()
{
    std::vector<StayPoint> out;
    if (!day_)
        return out;

    const std::size_t n = count_;
    if (n >= 2) {
        if (n == 2) {
            const auto& a = at(0).curve;
            const auto& b = at(1).curve;
            const double slope = (b.y - a.y) / (b.x - a.x);
            set_derivatives(0, slope, 0.0);
            set_derivatives(1, slope, 0.0);
        } else if (n == 3) {
            finalize_first();
            finalize_last();
        } else {
            finalize_last();
        }

        const auto& last = at(n - 1).curve;
        if (last.y < stationary_day_km(cfg_)) {
            // Whole day collapses to one stay; anything held is superseded.
            CurvePoint first{first_x_, 0.0, 0};
            const auto bounds = stay_bounds(nullptr, first, last, nullptr, cfg_);
            StayPoint sp;
            sp.day = *day_;
            sp.first_index = 0;
            sp.last_index = n - 1;
            sp.start_minute = first.x;
            sp.end_minute = last.x;
            sp.estimated_duration_min = bounds.duration();
            sp.latitude = lat_sum_ / static_cast<double>(n);
            sp.longitude = lon_sum_ / static_cast<double>(n);
            sp.confidence = 100.0;
            sp.cls = StayClass::Stay;
            held_.clear();
            displaced_ = true;
            emit(std::move(sp), out);
        } else {
            scan_through(n, out);
            if (open_start_ && any_nonzero_)
                close_region(*open_start_, n - 1, out);
            open_start_.reset();
            release_pending(out);
        }
    }
    reset_day();
    return out;
}

void StreamingDetector::set_derivatives(std::size_t index, double d1, double d2)
{
    auto& p = at(index);
    p.d1 = d1;
    p.d2 = d2;
    p.confidence = point_confidence(std::max(d1, 0.0), cfg_.d1_min_floor, cfg_.e);
}

void StreamingDetector::finalize_interior(std::size_t index)
{
    const auto& a = at(index - 1).curve;
    const auto& b = at(index).curve;
    const auto& c = at(index + 1).curve;
    set_derivatives(index, stencil::central_first(a.x, b.x, c.x, a.y, b.y, c.y),
                    stencil::second(a.x, b.x, c.x, a.y, b.y, c.y));
}

void StreamingDetector::finalize_first()
{
    const auto& a = at(0).curve;
    const auto& b = at(1).curve;
    const auto& c = at(2).curve;
    const double d1 = stencil::left_first(a.x, b.x, c.x, a.y, b.y, c.y);
    if (count_ == 3) {
        set_derivatives(0, d1, stencil::second(a.x, b.x, c.x, a.y, b.y, c.y));
        return;
    }
    const auto& d = at(3).curve;
    set_derivatives(0, d1, stencil::left_second({a.x, b.x, c.x, d.x}, {a.y, b.y, c.y, d.y}));
}

void StreamingDetector::finalize_last()
{
    const std::size_t n = count_;
    const auto& a = at(n - 3).curve;
    const auto& b = at(n - 2).curve;
    const auto& c = at(n - 1).curve;
    const double d1 = stencil::right_first(a.x, b.x, c.x, a.y, b.y, c.y);
    if (n == 3) {
        set_derivatives(n - 1, d1, stencil::second(a.x, b.x, c.x, a.y, b.y, c.y));
        return;
    }
    const auto& z = at(n - 4).curve;
    set_derivatives(n - 1, d1, stencil::right_second({z.x, a.x, b.x, c.x}, {z.y, a.y, b.y, c.y}));
}

void StreamingDetector::scan_through(std::size_t limit, std::vector<StayPoint>& out)
{
    while (scanned_ < limit)
        scan(scanned_++, out);
}

void StreamingDetector::scan(std::size_t index, std::vector<StayPoint>& out)
{
    const int s = tolerant_sign(at(index).d2);
    any_nonzero_ = any_nonzero_ || s != 0;
    if (s <= 0) {
        if (!open_start_)
            open_start_ = index;
        return;
    }
    if (open_start_) {
        close_region(*open_start_, index, out);
        open_start_.reset();
    }
    // Outside every region: a weak point here separates the pending stay
    // from anything that follows.
    if (pending_ && index > pending_->w && at(index).confidence < cfg_.stay_threshold)
        release_pending(out);
}

void StreamingDetector::close_region(std::size_t i, std::size_t j, std::vector<StayPoint>& out)
{
    std::vector<double> conf;
    conf.reserve(j - i + 1);
    for (std::size_t t = i; t <= j; ++t)
        conf.push_back(at(t).confidence);
    const auto rc = region_confidence(conf, 0, j - i, cfg_.stay_threshold);
    const Span next{rc.k + i, rc.w + i, rc.value, classify(rc.value, cfg_)};

    if (pending_ && next.cls == StayClass::Stay) {
        bool joined = true;
        for (std::size_t t = pending_->w + 1; t < next.k; ++t)
            if (at(t).confidence < cfg_.stay_threshold) {
                joined = false;
                break;
            }
        if (joined) {
            pending_->w = next.w;
            pending_->value = std::max(pending_->value, next.value);
            if (pending_->w < j)
                release_pending(out);
            return;
        }
    }
    release_pending(out);

    if (next.cls != StayClass::Stay) {
        emit(make_record(next), out);
        return;
    }
    pending_ = next;
    if (next.w < j)
        release_pending(out);
}

StayPoint StreamingDetector::make_record(const Span& span) const
{
    const CurvePoint* before = span.k > 0 ? &at(span.k - 1).curve : nullptr;
    const CurvePoint* after = span.w + 1 < count_ ? &at(span.w + 1).curve : nullptr;
    const auto bounds = stay_bounds(before, at(span.k).curve, at(span.w).curve, after, cfg_);

    double lat = 0.0;
    double lon = 0.0;
    for (std::size_t t = span.k; t <= span.w; ++t) {
        lat += at(t).latitude;
        lon += at(t).longitude;
    }
    const auto count = static_cast<double>(span.w - span.k + 1);

    StayPoint sp;
    sp.day = *day_;
    sp.first_index = span.k;
    sp.last_index = span.w;
    sp.start_minute = at(span.k).curve.x - bounds.lead;
    sp.end_minute = at(span.w).curve.x + bounds.trail;
    sp.estimated_duration_min = bounds.duration();
    sp.latitude = lat / count;
    sp.longitude = lon / count;
    sp.confidence = span.value;
    sp.cls = span.cls;
    return sp;
}

void StreamingDetector::emit(StayPoint record, std::vector<StayPoint>& out)
{
    if (!displaced_) {
        held_.push_back(std::move(record));
        return;
    }
    ++emitted_;
    out.push_back(std::move(record));
}

void StreamingDetector::release_pending(std::vector<StayPoint>& out)
{
    if (!pending_)
        return;
    auto record = make_record(*pending_);
    pending_.reset();
    emit(std::move(record), out);
}

void StreamingDetector::trim()
{
    std::size_t keep = count_ >= 4 ? count_ - 4 : 0;
    if (open_start_)
        keep = std::min(keep, *open_start_ > 0 ? *open_start_ - 1 : 0);
    if (pending_)
        keep = std::min(keep, pending_->k > 0 ? pending_->k - 1 : 0);
    while (base_ < keep) {
        window_.pop_front();
        ++base_;
    }
}

} // namespace staypoint
