#pragma once

#include "staypoint/curve_transform.hpp"
#include "staypoint/trajectory_io.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace staypoint {

struct StaySegment {
    double latitude = 0.0;
    double longitude = 0.0;
    double duration_min = 0.0;
    std::string label;
};

/// Great-circle travel from the current position at constant speed.
struct MoveSegment {
    double to_latitude = 0.0;
    double to_longitude = 0.0;
    double speed_kmh = 0.0;
    std::string label;      ///< optional tag, e.g. "slowdown"
};

using Segment = std::variant<StaySegment, MoveSegment>;

struct Scenario {
    Date day{};
    int utc_offset_min = 0;
    double start_minute = 0.0;          ///< local minutes since midnight
    std::optional<GeoPoint> origin;     ///< required when the first segment is a move
    std::vector<Segment> segments;

    double duration_min() const;

    /// Throws std::invalid_argument on non-positive durations or speeds, a
    /// stay that does not start where the previous segment ended (1 m
    /// tolerance), a leading move without an origin, or a scenario that runs
    /// past midnight.
    void validate() const;
};

/// A fix every `distance_m` metres of travel. At rest the receiver reports
/// `settle_fixes` fixes `settle_interval_min` apart starting on arrival, then
/// one every `idle_interval_min`.
struct EveryMeters {
    double distance_m = 100.0;
    double settle_interval_min = 2.0;
    int settle_fixes = 3;
    double idle_interval_min = 10.0;
};

/// Significant-change fixes while moving (every `distance_m` metres or every
/// `min_interval_min` minutes of travel, whichever comes first). Each one
/// schedules `burst` follow-up fixes `burst_spacing_min` apart; a newer
/// significant fix replaces the pending burst. Nothing is reported at rest.
struct Hybrid {
    double distance_m = 500.0;
    double min_interval_min = 5.0;
    int burst = 3;
    double burst_spacing_min = 1.0;
};

struct SamplingPolicy {
    std::variant<EveryMeters, Hybrid> kind = EveryMeters{};
    double noise_sigma_m = 0.0;
    double outlier_rate = 0.0;
    double outlier_max_m = 0.0;
    double time_resolution_s = 1.0;     ///< fix times are rounded to this; collisions dropped

    void validate() const;

    static SamplingPolicy every_meters(double distance_m);
    static SamplingPolicy hybrid();
    /// "sls100", "sls250", "sls500" or "hybrid"; throws std::invalid_argument.
    static SamplingPolicy from_name(std::string_view name);
};

struct GeneratedDay {
    Trajectory trajectory;
    std::vector<GroundTruthStay> truth;
};

/// Deterministic for a given seed. Fixes are first placed on the exact path;
/// noise and outliers are then applied per fix.
GeneratedDay generate(const Scenario& scenario, const SamplingPolicy& policy, std::uint64_t seed);

/// Sum of the move segments' great-circle lengths.
double path_length_km(const Scenario& scenario);

/// Point at `fraction` of the great-circle arc from a to b.
GeoPoint interpolate(GeoPoint a, GeoPoint b, double fraction);

/// Point `distance_km` from `from` along the initial bearing (radians from north).
GeoPoint destination(GeoPoint from, double bearing_rad, double distance_km);

Scenario parse_scenario_json(std::string_view text);
std::string write_scenario_json(const Scenario& scenario);

struct TimeWindow {
    double start_minute = 0.0;
    double end_minute = 0.0;
};

/// Time spans of consecutive move segments carrying `label`.
std::vector<TimeWindow> labelled_move_windows(const Scenario& scenario, std::string_view label);

/// Knobs for random_scenario.
struct CorpusOptions {
    Date day{std::chrono::year{2024}, std::chrono::month{3}, std::chrono::day{5}};
    GeoPoint home{48.137, 11.575};
    int min_visits = 2;
    int max_visits = 5;
    double min_stay_min = 5.0;
    double max_stay_min = 480.0;
    double short_stay_probability = 0.3;   ///< visits drawn from [min_stay_min, 15]
    double min_speed_kmh = 20.0;
    double max_speed_kmh = 90.0;
    double min_drive_km = 1.0;
    double max_drive_km = 6.0;
    /// Traffic-style slowdowns inserted into drives: the vehicle creeps
    /// around a small block at walking-to-cycling speed without stopping.
    int slowdowns = 0;
    double slowdown_min_minutes = 6.0;
    double slowdown_max_minutes = 10.0;
};

/// Home stay, a few drive/visit pairs, a drive home and a final home stay.
Scenario random_scenario(std::uint64_t seed, const CorpusOptions& options = {});

} // namespace staypoint
