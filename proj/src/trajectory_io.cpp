#include "staypoint/trajectory_io.hpp"

#include "text_util.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace staypoint {

using namespace std::chrono;
using detail::parse_double;
using detail::split_csv;
using detail::trim_line_end;

InputError::InputError(std::size_t line, std::string field, const std::string& message)
    : std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message)
    , line_(line)
    , field_(std::move(field))
{
}

namespace {

bool read_int(std::string_view text, std::size_t pos, std::size_t len, int& out)
{
    if (pos + len > text.size())
        return false;
    for (std::size_t i = pos; i < pos + len; ++i)
        if (text[i] < '0' || text[i] > '9')
            return false;
    std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return true;
}

bool expect(std::string_view text, std::size_t pos, char c)
{
    return pos < text.size() && text[pos] == c;
}

std::string two_digits(long value)
{
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%02ld", value);
    return buf;
}

} // namespace

Date parse_date(std::string_view text)
{
    int y = 0, m = 0, d = 0;
    if (text.size() != 10 || !read_int(text, 0, 4, y) || !expect(text, 4, '-') || !read_int(text, 5, 2, m)
        || !expect(text, 7, '-') || !read_int(text, 8, 2, d))
        throw InputError(0, "day", "invalid date '" + std::string(text) + "'");
    const Date date{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!date.ok())
        throw InputError(0, "day", "invalid date '" + std::string(text) + "'");
    return date;
}

std::string format_date(Date date)
{
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

ZonedTime parse_iso8601(std::string_view text)
{
    const auto fail = [&]() -> ZonedTime {
        throw InputError(0, "timestamp", "invalid ISO-8601 timestamp '" + std::string(text) + "'");
    };
    int hh = 0, mm = 0, ss = 0;
    if (text.size() < 19 || !(text[10] == 'T' || text[10] == ' ') || !read_int(text, 11, 2, hh)
        || !expect(text, 13, ':') || !read_int(text, 14, 2, mm) || !expect(text, 16, ':')
        || !read_int(text, 17, 2, ss))
        return fail();
    Date date{};
    try {
        date = parse_date(text.substr(0, 10));
    } catch (const InputError&) {
        return fail();
    }
    if (hh > 23 || mm > 59 || ss > 60)
        return fail();

    std::size_t pos = 19;
    long millis = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t digits = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (digits < 3)
                millis = millis * 10 + (text[pos] - '0');
            ++digits;
            ++pos;
        }
        if (digits == 0)
            return fail();
        for (std::size_t i = digits; i < 3; ++i)
            millis *= 10;
    }

    minutes offset{0};
    if (pos < text.size()) {
        const char sign = text[pos];
        if (sign == 'Z' && pos + 1 == text.size()) {
            pos += 1;
        } else if (sign == '+' || sign == '-') {
            int oh = 0, om = 0;
            if (!read_int(text, pos + 1, 2, oh))
                return fail();
            std::size_t mpos = pos + 3;
            if (expect(text, mpos, ':'))
                ++mpos;
            if (!read_int(text, mpos, 2, om) || mpos + 2 != text.size() || oh > 23 || om > 59)
                return fail();
            offset = minutes{(oh * 60 + om) * (sign == '-' ? -1 : 1)};
            pos = text.size();
        } else {
            return fail();
        }
    }
    if (pos != text.size())
        return fail();

    const auto local = sys_days{date} + hours{hh} + minutes{mm} + seconds{ss} + milliseconds{millis};
    return ZonedTime{Timestamp{local - offset}, offset};
}

std::string format_iso8601(Timestamp timestamp, minutes utc_offset)
{
    const auto local = timestamp + utc_offset;
    const auto day_start = floor<days>(local);
    const hh_mm_ss tod{local - day_start};
    std::string out = format_date(Date{day_start}) + 'T' + two_digits(tod.hours().count()) + ':'
        + two_digits(tod.minutes().count()) + ':' + two_digits(tod.seconds().count());
    if (const auto ms = tod.subseconds().count(); ms != 0) {
        char buf[8];
        std::snprintf(buf, sizeof(buf), ".%03ld", static_cast<long>(ms));
        out += buf;
    }
    if (utc_offset.count() == 0) {
        out += 'Z';
    } else {
        const long total = std::abs(utc_offset.count());
        out += utc_offset.count() < 0 ? '-' : '+';
        out += two_digits(total / 60) + ':' + two_digits(total % 60);
    }
    return out;
}

Date local_date(const LocationSample& sample)
{
    return Date{floor<days>(sample.timestamp + sample.utc_offset)};
}

Timestamp local_midnight(const LocationSample& sample)
{
    const auto local = sample.timestamp + sample.utc_offset;
    return Timestamp{floor<days>(local)} - sample.utc_offset;
}

namespace {

double coordinate(std::string_view text, std::size_t line, const char* field, double limit)
{
    const auto value = parse_double(text);
    if (!value || !std::isfinite(*value))
        throw InputError(line, field, std::string("malformed ") + field + " value '" + std::string(text) + "'");
    if (*value < -limit || *value > limit)
        throw InputError(line, field, std::string(field) + " out of range: " + std::string(text));
    return *value;
}

template <typename RowFn>
void for_each_data_line(std::istream& in, std::string_view expected_header, RowFn&& fn)
{
    std::string line;
    std::size_t number = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++number;
        const auto row = trim_line_end(line);
        if (!header_seen) {
            if (row != expected_header)
                throw InputError(number, "header", "expected header '" + std::string(expected_header) + "'");
            header_seen = true;
            continue;
        }
        if (row.empty())
            continue;
        fn(row, number);
    }
    if (!header_seen)
        throw InputError(0, "header", "missing header '" + std::string(expected_header) + "'");
}

} // namespace

LocationSample parse_trajectory_row(std::string_view row, std::size_t line)
{
    const auto fields = split_csv(trim_line_end(row));
    if (fields.size() != 3)
        throw InputError(line, "", "expected 3 fields, found " + std::to_string(fields.size()));
    LocationSample sample;
    try {
        const auto zt = parse_iso8601(fields[0]);
        sample.timestamp = zt.timestamp;
        sample.utc_offset = zt.utc_offset;
    } catch (const InputError& e) {
        throw InputError(line, "timestamp", e.what());
    }
    sample.latitude = coordinate(fields[1], line, "lat", 90.0);
    sample.longitude = coordinate(fields[2], line, "lon", 180.0);
    return sample;
}

std::vector<LocationSample> parse_trajectory_csv(std::istream& in)
{
    std::vector<LocationSample> samples;
    for_each_data_line(in, "timestamp,lat,lon", [&](std::string_view row, std::size_t number) {
        samples.push_back(parse_trajectory_row(row, number));
    });
    return samples;
}

std::vector<LocationSample> parse_trajectory_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse_trajectory_csv(in);
}

void write_trajectory_csv(std::ostream& out, const std::vector<LocationSample>& samples)
{
    out << "timestamp,lat,lon\n";
    for (const auto& s : samples)
        out << format_iso8601(s.timestamp, s.utc_offset) << ',' << detail::format_double(s.latitude) << ','
            << detail::format_double(s.longitude) << '\n';
}

namespace {

namespace pt = boost::property_tree;

std::string_view local_name(std::string_view name)
{
    const auto colon = name.rfind(':');
    return colon == std::string_view::npos ? name : name.substr(colon + 1);
}

void collect_trackpoints(const pt::ptree& node, GpxTrack& track)
{
    for (const auto& [name, child] : node) {
        if (name == "<xmlattr>" || name == "<xmlcomment>")
            continue;
        if (local_name(name) != "trkpt") {
            collect_trackpoints(child, track);
            continue;
        }
        const auto lat = child.get_optional<std::string>("<xmlattr>.lat");
        const auto lon = child.get_optional<std::string>("<xmlattr>.lon");
        if (!lat || !lon)
            throw InputError(0, "trkpt", "trkpt without lat/lon attributes");
        const pt::ptree* time_node = nullptr;
        for (const auto& [child_name, grandchild] : child)
            if (local_name(child_name) == "time")
                time_node = &grandchild;
        if (time_node == nullptr) {
            ++track.skipped_untimed;
            continue;
        }
        LocationSample sample;
        const auto zt = parse_iso8601(time_node->data());
        sample.timestamp = zt.timestamp;
        sample.utc_offset = zt.utc_offset;
        sample.latitude = coordinate(*lat, 0, "lat", 90.0);
        sample.longitude = coordinate(*lon, 0, "lon", 180.0);
        track.samples.push_back(sample);
    }
}

} // namespace

GpxTrack parse_gpx(std::string_view text)
{
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw InputError(e.line(), "", std::string("GPX parse error: ") + e.message());
    }
    const pt::ptree* root = nullptr;
    for (const auto& [name, child] : tree)
        if (local_name(name) == "gpx")
            root = &child;
    if (root == nullptr)
        throw InputError(0, "", "GPX parse error: no <gpx> root element");
    GpxTrack track;
    collect_trackpoints(*root, track);
    return track;
}

std::vector<Trajectory> split_by_day(const std::vector<LocationSample>& samples)
{
    std::map<sys_days, std::vector<LocationSample>> by_day;
    for (const auto& s : samples)
        by_day[sys_days{local_date(s)}].push_back(s);

    std::vector<Trajectory> days;
    days.reserve(by_day.size());
    for (auto& [day, group] : by_day) {
        std::stable_sort(group.begin(), group.end(),
                         [](const LocationSample& a, const LocationSample& b) { return a.timestamp < b.timestamp; });
        const auto last = std::unique(group.begin(), group.end(), [](const LocationSample& a, const LocationSample& b) {
            return a.timestamp == b.timestamp;
        });
        group.erase(last, group.end());
        days.push_back(Trajectory{Date{day}, std::move(group)});
    }
    return days;
}

std::vector<GroundTruthStay> parse_ground_truth(std::istream& in)
{
    std::vector<GroundTruthStay> stays;
    for_each_data_line(in, "day,arrival_min,departure_min,lat,lon,label", [&](std::string_view row, std::size_t number) {
        const auto fields = split_csv(row, 6);
        if (fields.size() < 5)
            throw InputError(number, "", "expected 6 fields, found " + std::to_string(fields.size()));
        GroundTruthStay stay;
        try {
            stay.day = parse_date(fields[0]);
        } catch (const InputError& e) {
            throw InputError(number, "day", e.what());
        }
        const auto minute = [&](std::string_view text, const char* field) {
            const auto value = parse_double(text);
            if (!value || !std::isfinite(*value))
                throw InputError(number, field, std::string("malformed ") + field + " '" + std::string(text) + "'");
            if (*value < 0.0 || *value > 1440.0)
                throw InputError(number, field, std::string(field) + " outside [0, 1440]");
            return *value;
        };
        stay.arrival_min = minute(fields[1], "arrival_min");
        stay.departure_min = minute(fields[2], "departure_min");
        if (stay.arrival_min > stay.departure_min)
            throw InputError(number, "departure_min", "departure before arrival");
        stay.latitude = coordinate(fields[3], number, "lat", 90.0);
        stay.longitude = coordinate(fields[4], number, "lon", 180.0);
        if (fields.size() == 6)
            stay.label = std::string(fields[5]);
        stays.push_back(std::move(stay));
    });
    return stays;
}

std::vector<GroundTruthStay> parse_ground_truth(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse_ground_truth(in);
}

void write_ground_truth(std::ostream& out, const std::vector<GroundTruthStay>& stays)
{
    out << "day,arrival_min,departure_min,lat,lon,label\n";
    for (const auto& s : stays)
        out << format_date(s.day) << ',' << detail::format_double(s.arrival_min) << ','
            << detail::format_double(s.departure_min) << ',' << detail::format_double(s.latitude) << ','
            << detail::format_double(s.longitude) << ',' << s.label << '\n';
}

} // namespace staypoint
