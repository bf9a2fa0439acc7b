#pragma once

#include <chrono>
#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace staypoint {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Date = std::chrono::year_month_day;

/// Error raised for malformed or out-of-range input. `line()` is 1-based
/// (0 when no line applies); `field()` names the offending column if any.
class InputError : public std::runtime_error {
public:
    InputError(std::size_t line, std::string field, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// One timestamped geographic fix. The UTC offset is kept so that the
/// subject's local day can be recovered.
struct LocationSample {
    Timestamp timestamp{};
    std::chrono::minutes utc_offset{0};
    double latitude = 0.0;
    double longitude = 0.0;

    bool operator==(const LocationSample&) const = default;
};

/// A single local calendar day of samples, sorted by timestamp.
struct Trajectory {
    Date day{};
    std::vector<LocationSample> samples;
};

/// Manually logged stay. Minutes are counted from local midnight.
struct GroundTruthStay {
    Date day{};
    double arrival_min = 0.0;
    double departure_min = 0.0;
    double latitude = 0.0;
    double longitude = 0.0;
    std::string label;

    double duration_min() const { return departure_min - arrival_min; }
    bool operator==(const GroundTruthStay&) const = default;
};

// ISO-8601 helpers. Accepted form: YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM|+HHMM].
// A missing offset is read as UTC.
struct ZonedTime {
    Timestamp timestamp{};
    std::chrono::minutes utc_offset{0};
};
ZonedTime parse_iso8601(std::string_view text);
std::string format_iso8601(Timestamp timestamp, std::chrono::minutes utc_offset);

Date parse_date(std::string_view text);
std::string format_date(Date day);

/// Calendar date of the sample in its own UTC offset.
Date local_date(const LocationSample& sample);

/// Absolute instant of local midnight for the sample's day and offset.
Timestamp local_midnight(const LocationSample& sample);

/// Parses `timestamp,lat,lon` CSV. Rows are returned in file order.
std::vector<LocationSample> parse_trajectory_csv(std::istream& in);
std::vector<LocationSample> parse_trajectory_csv(std::string_view text);

/// Parses a single data row (no header). `line` is used for error reporting.
LocationSample parse_trajectory_row(std::string_view row, std::size_t line);

void write_trajectory_csv(std::ostream& out, const std::vector<LocationSample>& samples);

struct GpxTrack {
    std::vector<LocationSample> samples;
    std::size_t skipped_untimed = 0;
};

/// Extracts timed `trkpt` elements of a GPX document in document order.
GpxTrack parse_gpx(std::string_view text);

/// Groups samples by local calendar date, sorts each day by timestamp and
/// drops samples that repeat an earlier timestamp.
std::vector<Trajectory> split_by_day(const std::vector<LocationSample>& samples);

/// Parses `day,arrival_min,departure_min,lat,lon,label` CSV.
std::vector<GroundTruthStay> parse_ground_truth(std::istream& in);
std::vector<GroundTruthStay> parse_ground_truth(std::string_view text);

void write_ground_truth(std::ostream& out, const std::vector<GroundTruthStay>& stays);

} // namespace staypoint
