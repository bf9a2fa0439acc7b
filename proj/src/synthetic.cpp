#include "staypoint/synthetic.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace staypoint {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kLastMinute = 1439.0 + 59.0 / 60.0;   // 23:59:59
constexpr double kSameSpotKm = 0.001;

struct Vec3 {
    double x, y, z;
};

Vec3 to_vec(GeoPoint p)
{
    const double lat = p.latitude * kDegToRad;
    const double lon = p.longitude * kDegToRad;
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

GeoPoint to_geo(Vec3 v)
{
    return {std::atan2(v.z, std::hypot(v.x, v.y)) * kRadToDeg, std::atan2(v.y, v.x) * kRadToDeg};
}

bool same_spot(GeoPoint a, GeoPoint b)
{
    return haversine_km(a, b) <= kSameSpotKm;
}

// One stretch of the day during which the subject is either still or moving
// along a single arc at constant speed.
struct Piece {
    double t0 = 0.0;
    double t1 = 0.0;
    GeoPoint from;
    GeoPoint to;
    double km = 0.0;
    bool moving = false;
};

struct Timeline {
    std::vector<Piece> pieces;
    std::vector<GroundTruthStay> truth;
    double start = 0.0;
    double end = 0.0;
    GeoPoint initial;

    GeoPoint at(double t) const
    {
        if (pieces.empty())
            return initial;
        auto it = std::upper_bound(pieces.begin(), pieces.end(), t,
                                   [](double v, const Piece& p) { return v < p.t1; });
        if (it == pieces.end())
            return pieces.back().to;
        if (!it->moving || t <= it->t0)
            return it->from;
        return interpolate(it->from, it->to, (t - it->t0) / (it->t1 - it->t0));
    }
};

GeoPoint starting_point(const Scenario& s)
{
    if (s.origin)
        return *s.origin;
    if (!s.segments.empty())
        if (const auto* stay = std::get_if<StaySegment>(&s.segments.front()))
            return {stay->latitude, stay->longitude};
    return {};
}

Timeline build_timeline(const Scenario& s)
{
    Timeline tl;
    tl.start = s.start_minute;
    tl.initial = starting_point(s);
    GeoPoint pos = tl.initial;
    double t = s.start_minute;
    for (const auto& seg : s.segments) {
        if (const auto* stay = std::get_if<StaySegment>(&seg)) {
            const GeoPoint here{stay->latitude, stay->longitude};
            tl.pieces.push_back({t, t + stay->duration_min, here, here, 0.0, false});
            tl.truth.push_back({s.day, t, t + stay->duration_min, here.latitude, here.longitude, stay->label});
            t += stay->duration_min;
            pos = here;
        } else {
            const auto& move = std::get<MoveSegment>(seg);
            const GeoPoint to{move.to_latitude, move.to_longitude};
            const double km = haversine_km(pos, to);
            const double minutes = km / (move.speed_kmh / 60.0);
            if (minutes > 0.0)
                tl.pieces.push_back({t, t + minutes, pos, to, km, true});
            t += minutes;
            pos = to;
        }
    }
    tl.end = t;
    return tl;
}

struct Fix {
    double t;
    GeoPoint p;
};

void every_meters_fixes(const Timeline& tl, const EveryMeters& policy, std::vector<Fix>& out)
{
    const double step_km = policy.distance_m / 1000.0;
    double since_fix_km = 0.0;
    for (const auto& piece : tl.pieces) {
        if (piece.moving) {
            double s = step_km - since_fix_km;
            const double duration = piece.t1 - piece.t0;
            for (; s <= piece.km + 1e-9; s += step_km) {
                const double f = std::min(1.0, s / piece.km);
                out.push_back({piece.t0 + f * duration, interpolate(piece.from, piece.to, f)});
            }
            since_fix_km = piece.km - s + step_km;
            continue;
        }
        since_fix_km = 0.0;
        double t = piece.t0;
        for (int i = 0; t < piece.t1; ++i) {
            out.push_back({t, piece.from});
            t += i + 1 < policy.settle_fixes ? policy.settle_interval_min : policy.idle_interval_min;
        }
    }
}

void hybrid_fixes(const Timeline& tl, const Hybrid& policy, std::vector<Fix>& out)
{
    const double step_km = policy.distance_m / 1000.0;
    std::vector<double> significant{tl.start};
    double since_km = 0.0;
    double since_min = 0.0;
    for (const auto& piece : tl.pieces) {
        if (!piece.moving) {
            since_km = since_min = 0.0;
            continue;
        }
        const double duration = piece.t1 - piece.t0;
        const double speed = piece.km / duration;
        double used = 0.0;
        for (;;) {
            const double need = std::min((step_km - since_km) / speed, policy.min_interval_min - since_min);
            if (used + need > duration)
                break;
            used += need;
            significant.push_back(piece.t0 + used);
            since_km = since_min = 0.0;
        }
        since_km += speed * (duration - used);
        since_min += duration - used;
    }

    for (std::size_t i = 0; i < significant.size(); ++i) {
        const double s = significant[i];
        out.push_back({s, tl.at(s)});
        for (int k = 1; k <= policy.burst; ++k) {
            const double t = s + k * policy.burst_spacing_min;
            if ((i + 1 < significant.size() && t >= significant[i + 1]) || t > tl.end)
                break;
            out.push_back({t, tl.at(t)});
        }
    }
}

GeoPoint displace(GeoPoint p, double north_m, double east_m)
{
    const double r_m = kEarthRadiusKm * 1000.0;
    GeoPoint q;
    q.latitude = std::clamp(p.latitude + north_m / r_m * kRadToDeg, -90.0, 90.0);
    const double c = std::max(std::cos(p.latitude * kDegToRad), 1e-12);
    q.longitude = p.longitude + east_m / (r_m * c) * kRadToDeg;
    if (q.longitude > 180.0)
        q.longitude -= 360.0;
    else if (q.longitude < -180.0)
        q.longitude += 360.0;
    return q;
}

} // namespace

double Scenario::duration_min() const
{
    GeoPoint pos = starting_point(*this);
    double total = 0.0;
    for (const auto& seg : segments) {
        if (const auto* stay = std::get_if<StaySegment>(&seg)) {
            total += stay->duration_min;
            pos = {stay->latitude, stay->longitude};
        } else {
            const auto& move = std::get<MoveSegment>(seg);
            const GeoPoint to{move.to_latitude, move.to_longitude};
            total += haversine_km(pos, to) / (move.speed_kmh / 60.0);
            pos = to;
        }
    }
    return total;
}

void Scenario::validate() const
{
    if (segments.empty())
        throw std::invalid_argument("scenario has no segments");
    if (!(start_minute >= 0.0 && start_minute < 1440.0))
        throw std::invalid_argument("start_minute must be in [0, 1440)");
    if (std::abs(utc_offset_min) > 18 * 60)
        throw std::invalid_argument("utc_offset_min out of range");
    if (!origin && std::holds_alternative<MoveSegment>(segments.front()))
        throw std::invalid_argument("a scenario starting with a move needs an origin");

    GeoPoint pos = starting_point(*this);
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto where = "segment " + std::to_string(i) + ": ";
        if (const auto* stay = std::get_if<StaySegment>(&segments[i])) {
            if (!(stay->duration_min > 0.0))
                throw std::invalid_argument(where + "stay duration must be positive");
            const GeoPoint here{stay->latitude, stay->longitude};
            if (std::abs(here.latitude) > 90.0 || std::abs(here.longitude) > 180.0)
                throw std::invalid_argument(where + "coordinate out of range");
            if (!same_spot(pos, here))
                throw std::invalid_argument(where + "stay does not start where the previous segment ended");
            pos = here;
        } else {
            const auto& move = std::get<MoveSegment>(segments[i]);
            if (!(move.speed_kmh > 0.0))
                throw std::invalid_argument(where + "speed must be positive");
            if (std::abs(move.to_latitude) > 90.0 || std::abs(move.to_longitude) > 180.0)
                throw std::invalid_argument(where + "coordinate out of range");
            pos = {move.to_latitude, move.to_longitude};
        }
    }
    if (start_minute + duration_min() > 1440.0)
        throw std::invalid_argument("scenario runs past the end of the day");
}

void SamplingPolicy::validate() const
{
    if (const auto* em = std::get_if<EveryMeters>(&kind)) {
        if (!(em->distance_m > 0.0))
            throw std::invalid_argument("distance_m must be positive");
        if (!(em->settle_interval_min > 0.0) || !(em->idle_interval_min > 0.0) || em->settle_fixes < 1)
            throw std::invalid_argument("stationary sampling intervals must be positive");
    } else {
        const auto& h = std::get<Hybrid>(kind);
        if (!(h.distance_m > 0.0) || !(h.min_interval_min > 0.0))
            throw std::invalid_argument("hybrid distance and interval must be positive");
        if (h.burst < 0 || !(h.burst_spacing_min > 0.0))
            throw std::invalid_argument("invalid hybrid burst");
    }
    if (!(noise_sigma_m >= 0.0))
        throw std::invalid_argument("noise sigma must be non-negative");
    if (!(outlier_rate >= 0.0 && outlier_rate <= 1.0))
        throw std::invalid_argument("outlier_rate must be in [0, 1]");
    if (!(outlier_max_m >= 0.0))
        throw std::invalid_argument("outlier_max_m must be non-negative");
    if (!(time_resolution_s > 0.0))
        throw std::invalid_argument("time_resolution_s must be positive");
}

SamplingPolicy SamplingPolicy::every_meters(double distance_m)
{
    SamplingPolicy p;
    p.kind = EveryMeters{distance_m};
    return p;
}

SamplingPolicy SamplingPolicy::hybrid()
{
    SamplingPolicy p;
    p.kind = Hybrid{};
    return p;
}

SamplingPolicy SamplingPolicy::from_name(std::string_view name)
{
    if (name == "sls100")
        return every_meters(100.0);
    if (name == "sls250")
        return every_meters(250.0);
    if (name == "sls500")
        return every_meters(500.0);
    if (name == "hybrid")
        return hybrid();
    throw std::invalid_argument("unknown sampling policy '" + std::string(name) + "'");
}

GeoPoint interpolate(GeoPoint a, GeoPoint b, double fraction)
{
    const Vec3 u = to_vec(a);
    const Vec3 v = to_vec(b);
    const double dot = std::clamp(u.x * v.x + u.y * v.y + u.z * v.z, -1.0, 1.0);
    const double omega = std::acos(dot);
    if (omega < 1e-12)
        return fraction < 0.5 ? a : b;
    const double s = std::sin(omega);
    const double wa = std::sin((1.0 - fraction) * omega) / s;
    const double wb = std::sin(fraction * omega) / s;
    return to_geo({wa * u.x + wb * v.x, wa * u.y + wb * v.y, wa * u.z + wb * v.z});
}

GeoPoint destination(GeoPoint from, double bearing_rad, double distance_km)
{
    const double lat1 = from.latitude * kDegToRad;
    const double lon1 = from.longitude * kDegToRad;
    const double d = distance_km / kEarthRadiusKm;
    const double lat2 = std::asin(std::sin(lat1) * std::cos(d) + std::cos(lat1) * std::sin(d) * std::cos(bearing_rad));
    const double lon2 = lon1 + std::atan2(std::sin(bearing_rad) * std::sin(d) * std::cos(lat1),
                                          std::cos(d) - std::sin(lat1) * std::sin(lat2));
    double lon = lon2 * kRadToDeg;
    if (lon > 180.0)
        lon -= 360.0;
    else if (lon < -180.0)
        lon += 360.0;
    return {lat2 * kRadToDeg, lon};
}

double path_length_km(const Scenario& scenario)
{
    double total = 0.0;
    for (const auto& piece : build_timeline(scenario).pieces)
        total += piece.km;
    return total;
}

GeneratedDay generate(const Scenario& scenario, const SamplingPolicy& policy, std::uint64_t seed)
{
    scenario.validate();
    policy.validate();
    const Timeline tl = build_timeline(scenario);

    std::vector<Fix> fixes{{tl.start, tl.initial}};
    if (const auto* em = std::get_if<EveryMeters>(&policy.kind))
        every_meters_fixes(tl, *em, fixes);
    else
        hybrid_fixes(tl, std::get<Hybrid>(policy.kind), fixes);
    const double last = std::min(tl.end, kLastMinute);
    fixes.push_back({last, tl.at(last)});
    std::stable_sort(fixes.begin(), fixes.end(), [](const Fix& a, const Fix& b) { return a.t < b.t; });

    const auto offset = std::chrono::minutes{scenario.utc_offset_min};
    const Timestamp midnight = Timestamp{std::chrono::sys_days{scenario.day}} - offset;
    const double resolution_min = policy.time_resolution_s / 60.0;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    GeneratedDay day;
    day.trajectory.day = scenario.day;
    day.truth = tl.truth;
    std::optional<Timestamp> previous;
    for (const auto& fix : fixes) {
        const double t = std::min(std::round(fix.t / resolution_min) * resolution_min, kLastMinute);
        const Timestamp ts = midnight + std::chrono::milliseconds{std::llround(t * 60000.0)};
        if (previous && ts <= *previous)
            continue;
        previous = ts;

        double north = 0.0;
        double east = 0.0;
        if (policy.noise_sigma_m > 0.0) {
            north = gauss(rng) * policy.noise_sigma_m;
            east = gauss(rng) * policy.noise_sigma_m;
        }
        if (policy.outlier_rate > 0.0 && unit(rng) < policy.outlier_rate) {
            const double r = unit(rng) * policy.outlier_max_m;
            const double theta = unit(rng) * 2.0 * std::numbers::pi;
            north += r * std::cos(theta);
            east += r * std::sin(theta);
        }
        const GeoPoint p = displace(fix.p, north, east);
        day.trajectory.samples.push_back({ts, offset, p.latitude, p.longitude});
    }
    return day;
}

std::vector<TimeWindow> labelled_move_windows(const Scenario& scenario, std::string_view label)
{
    std::vector<TimeWindow> out;
    GeoPoint pos = starting_point(scenario);
    double t = scenario.start_minute;
    bool open = false;
    for (const auto& seg : scenario.segments) {
        double dt = 0.0;
        bool tagged = false;
        if (const auto* stay = std::get_if<StaySegment>(&seg)) {
            dt = stay->duration_min;
            pos = {stay->latitude, stay->longitude};
        } else {
            const auto& move = std::get<MoveSegment>(seg);
            const GeoPoint to{move.to_latitude, move.to_longitude};
            dt = haversine_km(pos, to) / (move.speed_kmh / 60.0);
            pos = to;
            tagged = move.label == label;
        }
        if (tagged && open)
            out.back().end_minute = t + dt;
        else if (tagged)
            out.push_back({t, t + dt});
        open = tagged;
        t += dt;
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

double number_field(const json& obj, const char* key)
{
    const auto it = obj.find(key);
    if (it == obj.end() || !it->is_number())
        throw std::invalid_argument(std::string("scenario: missing or non-numeric '") + key + "'");
    return it->get<double>();
}

} // namespace

Scenario parse_scenario_json(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario: ") + e.what());
    }
    if (!doc.is_object())
        throw std::invalid_argument("scenario: top level must be an object");

    Scenario s;
    const auto day = doc.find("day");
    if (day == doc.end() || !day->is_string())
        throw std::invalid_argument("scenario: missing 'day'");
    try {
        s.day = parse_date(day->get<std::string>());
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("scenario: ") + e.what());
    }
    if (doc.contains("utc_offset_min"))
        s.utc_offset_min = static_cast<int>(number_field(doc, "utc_offset_min"));
    if (doc.contains("start_minute"))
        s.start_minute = number_field(doc, "start_minute");
    if (doc.contains("origin")) {
        const auto& o = doc["origin"];
        if (!o.is_object())
            throw std::invalid_argument("scenario: 'origin' must be an object");
        s.origin = GeoPoint{number_field(o, "lat"), number_field(o, "lon")};
    }

    const auto segs = doc.find("segments");
    if (segs == doc.end() || !segs->is_array())
        throw std::invalid_argument("scenario: missing 'segments' array");
    for (const auto& seg : *segs) {
        if (!seg.is_object() || !seg.contains("type") || !seg["type"].is_string())
            throw std::invalid_argument("scenario: every segment needs a 'type'");
        const auto type = seg["type"].get<std::string>();
        const std::string label = seg.contains("label") && seg["label"].is_string() ? seg["label"].get<std::string>() : "";
        if (type == "stay")
            s.segments.emplace_back(StaySegment{number_field(seg, "lat"), number_field(seg, "lon"),
                                                number_field(seg, "duration_min"), label});
        else if (type == "move")
            s.segments.emplace_back(MoveSegment{number_field(seg, "to_lat"), number_field(seg, "to_lon"),
                                                number_field(seg, "speed_kmh"), label});
        else
            throw std::invalid_argument("scenario: unknown segment type '" + type + "'");
    }
    s.validate();
    return s;
}

std::string write_scenario_json(const Scenario& scenario)
{
    json doc;
    doc["day"] = format_date(scenario.day);
    doc["utc_offset_min"] = scenario.utc_offset_min;
    doc["start_minute"] = scenario.start_minute;
    if (scenario.origin)
        doc["origin"] = {{"lat", scenario.origin->latitude}, {"lon", scenario.origin->longitude}};
    json segs = json::array();
    for (const auto& seg : scenario.segments) {
        if (const auto* stay = std::get_if<StaySegment>(&seg)) {
            json j = {{"type", "stay"}, {"lat", stay->latitude}, {"lon", stay->longitude},
                      {"duration_min", stay->duration_min}};
            if (!stay->label.empty())
                j["label"] = stay->label;
            segs.push_back(std::move(j));
        } else {
            const auto& move = std::get<MoveSegment>(seg);
            json j = {{"type", "move"}, {"to_lat", move.to_latitude}, {"to_lon", move.to_longitude},
                      {"speed_kmh", move.speed_kmh}};
            if (!move.label.empty())
                j["label"] = move.label;
            segs.push_back(std::move(j));
        }
    }
    doc["segments"] = std::move(segs);
    return doc.dump(2);
}

// ---------------------------------------------------------------------------
// Random scenarios

namespace {

class Builder {
public:
    Builder(Scenario& s, GeoPoint start)
        : s_(s), pos_(start)
    {
    }

    void stay(double minutes, std::string label)
    {
        s_.segments.emplace_back(StaySegment{pos_.latitude, pos_.longitude, minutes, std::move(label)});
        t_ += minutes;
    }

    void move(GeoPoint to, double speed_kmh, std::string label = {})
    {
        s_.segments.emplace_back(MoveSegment{to.latitude, to.longitude, speed_kmh, std::move(label)});
        t_ += haversine_km(pos_, to) / (speed_kmh / 60.0);
        pos_ = to;
    }

    double time() const { return t_; }
    GeoPoint position() const { return pos_; }

private:
    Scenario& s_;
    GeoPoint pos_;
    double t_ = 0.0;
};

constexpr double kBlockKm = 0.1;
constexpr double kCreepSpeeds[] = {9.0, 10.0, 11.0};

// Circles a square block starting and ending at the current position until
// at least `minutes` have passed.
void creep(Builder& b, double bearing, double minutes)
{
    const GeoPoint c0 = b.position();
    const GeoPoint c1 = destination(c0, bearing, kBlockKm);
    const GeoPoint c2 = destination(c1, bearing + std::numbers::pi / 2.0, kBlockKm);
    const GeoPoint c3 = destination(c0, bearing + std::numbers::pi / 2.0, kBlockKm);
    const GeoPoint corners[] = {c1, c2, c3, c0};
    const double until = b.time() + minutes;
    for (std::size_t side = 0; b.time() < until || side % 4 != 0; ++side)
        b.move(corners[side % 4], kCreepSpeeds[side % 3], "slowdown");
}

void drive(Builder& b, GeoPoint to, double speed, int slowdowns, std::mt19937_64& rng, const CorpusOptions& opt)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const GeoPoint from = b.position();
    for (int q = 1; q <= slowdowns; ++q) {
        b.move(interpolate(from, to, static_cast<double>(q) / (slowdowns + 1)), speed);
        const double minutes = opt.slowdown_min_minutes + unit(rng) * (opt.slowdown_max_minutes - opt.slowdown_min_minutes);
        creep(b, unit(rng) * 2.0 * std::numbers::pi, minutes);
    }
    b.move(to, speed);
}

} // namespace

Scenario random_scenario(std::uint64_t seed, const CorpusOptions& opt)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto uniform = [&](double lo, double hi) { return lo + unit(rng) * (hi - lo); };

    Scenario s;
    s.day = opt.day;
    Builder b(s, opt.home);

    const int visits = std::uniform_int_distribution<int>(opt.min_visits, opt.max_visits)(rng);
    std::vector<int> slowdowns(static_cast<std::size_t>(visits + 1), 0);
    for (int i = 0; i < opt.slowdowns; ++i)
        ++slowdowns[static_cast<std::size_t>(i % (visits + 1))];
    // Upper bound on the creeping time one slowdown can add.
    const double creep_reserve = opt.slowdown_max_minutes + 4.0 * kBlockKm / (kCreepSpeeds[0] / 60.0);
    const double min_km_per_min = opt.min_speed_kmh / 60.0;

    b.stay(uniform(std::min(240.0, opt.max_stay_min), opt.max_stay_min), "home");
    int placed = 0;

    for (int v = 0; v < visits; ++v) {
        const GeoPoint to = destination(b.position(), uniform(0.0, 2.0 * std::numbers::pi),
                                        uniform(opt.min_drive_km, opt.max_drive_km));
        const double speed = uniform(opt.min_speed_kmh, opt.max_speed_kmh);
        const int here = slowdowns[static_cast<std::size_t>(v)];
        const double drive_min = haversine_km(b.position(), to) / (speed / 60.0) + here * creep_reserve;
        // Slowdowns of visits that get skipped move to the drive home.
        const int later = opt.slowdowns - placed - here;
        const double home_min = haversine_km(to, opt.home) / min_km_per_min + later * creep_reserve;
        const double budget = 1439.0 - b.time() - drive_min - home_min - opt.min_stay_min;
        if (budget < opt.min_stay_min)
            break;
        placed += here;
        double minutes = unit(rng) < opt.short_stay_probability
            ? uniform(opt.min_stay_min, std::min(15.0, opt.max_stay_min))
            : uniform(15.0, std::min(240.0, opt.max_stay_min));
        minutes = std::min(minutes, budget);
        drive(b, to, speed, here, rng, opt);
        b.stay(minutes, "visit " + std::to_string(v + 1));
    }

    drive(b, opt.home, uniform(opt.min_speed_kmh, opt.max_speed_kmh), opt.slowdowns - placed, rng, opt);
    const double remaining = 1439.0 - b.time();
    b.stay(std::max(std::min(remaining, opt.max_stay_min), opt.min_stay_min), "home");
    return s;
}

} // namespace staypoint
