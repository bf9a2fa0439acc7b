#include "doctest.h"
#include "helpers.hpp"

#include "staypoint/trajectory_io.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace staypoint;
using namespace std::chrono;

namespace {

template <class F>
InputError capture(F&& f)
{
    try {
        f();
    } catch (const InputError& e) {
        return e;
    }
    FAIL("expected InputError");
    return InputError(0, "", "");
}

LocationSample sample(const char* iso, double lat, double lon)
{
    const auto z = parse_iso8601(iso);
    return {z.timestamp, z.utc_offset, lat, lon};
}

} // namespace

TEST_CASE("csv: single row")
{
    const auto s = parse_trajectory_csv("timestamp,lat,lon\n2017-03-01T08:00:00+02:00,35.1,33.3");
    REQUIRE(s.size() == 1);
    CHECK(s[0].latitude == 35.1);
    CHECK(s[0].longitude == 33.3);
    CHECK(s[0].utc_offset == minutes{120});
    CHECK(s[0].timestamp == sys_days{2017y / March / 1} + hours{6});
    CHECK(local_date(s[0]) == 2017y / March / 1);
}

TEST_CASE("csv: header only gives no samples")
{
    CHECK(parse_trajectory_csv("timestamp,lat,lon\n").empty());
    CHECK(parse_trajectory_csv("timestamp,lat,lon").empty());
}

TEST_CASE("csv: rows kept in file order, duplicates kept")
{
    const auto s = parse_trajectory_csv("timestamp,lat,lon\n"
                                        "2017-03-01T09:00:00Z,1,1\n"
                                        "2017-03-01T08:00:00Z,2,2\n"
                                        "2017-03-01T08:00:00Z,3,3\n");
    REQUIRE(s.size() == 3);
    CHECK(s[0].latitude == 1);
    CHECK(s[1].latitude == 2);
    CHECK(s[2].latitude == 3);
}

TEST_CASE("csv: errors carry line and field")
{
    auto e = capture([] { parse_trajectory_csv("timestamp,lat,lon\n2017-03-01T08:00:00Z,95.0,33.3\n"); });
    CHECK(e.line() == 2);
    CHECK(e.field() == "lat");
    CHECK(std::string(e.what()).find("lat") != std::string::npos);

    e = capture([] { parse_trajectory_csv("timestamp,lat,lon\n2017-03-01T08:00:00Z,1,1\n2017-03-01T08:00:00Z,1,-181\n"); });
    CHECK(e.line() == 3);
    CHECK(e.field() == "lon");

    e = capture([] { parse_trajectory_csv("timestamp,lat,lon\n2017-03-01T08:00:00Z,abc,1\n"); });
    CHECK(e.field() == "lat");

    e = capture([] { parse_trajectory_csv("timestamp,lat,lon\n2017-03-01T08:00:00Z,1\n"); });
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("expected 3 fields") != std::string::npos);

    e = capture([] { parse_trajectory_csv("timestamp,lat,lon\n\n2017-13-01T08:00:00Z,1,1\n"); });
    CHECK(e.field() == "timestamp");

    e = capture([] { parse_trajectory_csv("time,lat,lon\n"); });
    CHECK(e.field() == "header");

    CHECK_THROWS_AS(parse_trajectory_csv(""), InputError);
}

TEST_CASE("iso8601 forms")
{
    const auto base = sys_days{2017y / March / 1} + hours{8};
    CHECK(parse_iso8601("2017-03-01T08:00:00Z").timestamp == base);
    CHECK(parse_iso8601("2017-03-01T08:00:00").timestamp == base);
    CHECK(parse_iso8601("2017-03-01T10:00:00+02:00").timestamp == base);
    CHECK(parse_iso8601("2017-03-01T10:00:00+0200").timestamp == base);
    CHECK(parse_iso8601("2017-03-01T03:30:00-04:30").timestamp == base);
    CHECK(parse_iso8601("2017-03-01T03:30:00-04:30").utc_offset == minutes{-270});
    CHECK(parse_iso8601("2017-03-01T08:00:00.250Z").timestamp == base + milliseconds{250});

    CHECK(format_iso8601(base, minutes{0}) == "2017-03-01T08:00:00Z");
    CHECK(format_iso8601(base, minutes{120}) == "2017-03-01T10:00:00+02:00");
    CHECK(format_iso8601(base + milliseconds{5}, minutes{-270}) == "2017-03-01T03:30:00.005-04:30");

    for (const char* bad : {"", "2017-03-01", "2017-02-30T00:00:00Z", "2017-03-01T25:00:00Z", "2017-03-01T08:00:00+2",
                            "2017-03-01T08:00:00Zjunk"})
        CHECK_THROWS_AS(parse_iso8601(bad), InputError);
}

TEST_CASE("local midnight follows the sample's own offset")
{
    const auto s = sample("2017-03-01T00:30:00+02:00", 0, 0);
    CHECK(local_date(s) == 2017y / March / 1);
    CHECK(local_midnight(s) == sys_days{2017y / February / 28} + hours{22});

    const auto w = sample("2017-03-01T23:30:00-05:00", 0, 0);
    CHECK(local_date(w) == 2017y / March / 1);
}

TEST_CASE("property: csv round trip")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lat(-90.0, 90.0), lon(-180.0, 180.0);
    std::uniform_int_distribution<std::int64_t> ms(0, 400LL * 86'400'000LL);
    std::uniform_int_distribution<int> offset(-12 * 4, 14 * 4);
    for (int round = 0; round < 50; ++round) {
        std::vector<LocationSample> in(1 + round % 17);
        for (auto& s : in) {
            s.timestamp = Timestamp{milliseconds{ms(rng)}} + (sys_days{2000y / January / 1}).time_since_epoch();
            s.utc_offset = minutes{15 * offset(rng)};
            s.latitude = lat(rng);
            s.longitude = lon(rng);
        }
        std::ostringstream out;
        write_trajectory_csv(out, in);
        CHECK(parse_trajectory_csv(out.str()) == in);
    }
}

TEST_CASE("gpx")
{
    const char* three = R"(<?xml version="1.0"?>
<gpx version="1.1" creator="t" xmlns="http://www.topografix.com/GPX/1/1">
 <trk><trkseg>
  <trkpt lat="35.1" lon="33.3"><time>2017-03-01T08:00:00Z</time></trkpt>
  <trkpt lat="35.2" lon="33.4"><ele>10</ele><time>2017-03-01T08:01:00Z</time></trkpt>
  <trkpt lon="33.5" lat="35.3"><time>2017-03-01T08:02:00+02:00</time></trkpt>
 </trkseg></trk>
</gpx>)";
    const auto t = parse_gpx(three);
    REQUIRE(t.samples.size() == 3);
    CHECK(t.skipped_untimed == 0);
    CHECK(t.samples[1].latitude == 35.2);
    CHECK(t.samples[2].longitude == 33.5);
    CHECK(t.samples[2].utc_offset == minutes{120});

    const char* untimed = R"(<gpx version="1.1"><trk><trkseg>
  <trkpt lat="1" lon="1"><time>2017-03-01T08:00:00Z</time></trkpt>
  <trkpt lat="2" lon="2"></trkpt>
  <trkpt lat="3" lon="3"><time>2017-03-01T08:02:00Z</time></trkpt>
 </trkseg></trk></gpx>)";
    const auto u = parse_gpx(untimed);
    CHECK(u.samples.size() == 2);
    CHECK(u.skipped_untimed == 1);
    CHECK(u.samples[1].latitude == 3);

    CHECK_THROWS_AS(parse_gpx("hello"), InputError);
    CHECK_THROWS_AS(parse_gpx("<gpx><trk>"), InputError);
    CHECK_THROWS_AS(parse_gpx("<other/>"), InputError);
    CHECK_THROWS_AS(parse_gpx(R"(<gpx><trk><trkseg><trkpt lat="1"><time>2017-03-01T08:00:00Z</time></trkpt></trkseg></trk></gpx>)"),
                    InputError);
    CHECK_THROWS_AS(parse_gpx(R"(<gpx><trk><trkseg><trkpt lat="91" lon="1"><time>2017-03-01T08:00:00Z</time></trkpt></trkseg></trk></gpx>)"),
                    InputError);
}

TEST_CASE("split_by_day examples")
{
    const std::vector<LocationSample> two_days{
        sample("2017-03-01T23:00:00Z", 1, 1),
        sample("2017-03-02T01:00:00Z", 2, 2),
        sample("2017-03-01T22:00:00Z", 3, 3),
    };
    const auto days = split_by_day(two_days);
    REQUIRE(days.size() == 2);
    CHECK(days[0].day == 2017y / March / 1);
    CHECK(days[0].samples.size() == 2);
    CHECK(days[0].samples[0].latitude == 3);
    CHECK(days[1].day == 2017y / March / 2);

    std::vector<LocationSample> shuffled;
    for (int m : {4, 1, 3, 0, 2})
        shuffled.push_back({test::at_minute(480 + m), minutes{0}, double(m), 0});
    const auto one = split_by_day(shuffled);
    REQUIRE(one.size() == 1);
    REQUIRE(one[0].samples.size() == 5);
    for (int m = 0; m < 5; ++m)
        CHECK(one[0].samples[m].latitude == m);

    const std::vector<LocationSample> dup{{test::at_minute(480), minutes{0}, 1, 1}, {test::at_minute(480), minutes{0}, 2, 2}};
    const auto d = split_by_day(dup);
    REQUIRE(d.size() == 1);
    REQUIRE(d[0].samples.size() == 1);
    CHECK(d[0].samples[0].latitude == 1);

    CHECK(split_by_day({}).empty());
}

TEST_CASE("property: split_by_day partitions by date and keeps the deduplicated multiset")
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> minute(0, 4 * 1440 - 1);
    std::uniform_int_distribution<int> offset(-8, 8);
    for (int round = 0; round < 100; ++round) {
        std::vector<LocationSample> in(rng() % 60);
        for (std::size_t i = 0; i < in.size(); ++i)
            in[i] = {test::at_minute(minute(rng) / 4 * 4.0), minutes{60 * offset(rng)}, double(i), 0};

        // First occurrence of each (local day, instant) survives.
        std::set<std::pair<int, std::int64_t>> seen;
        std::multiset<double> expected;
        for (const auto& s : in) {
            const auto key = std::pair{int(sys_days{local_date(s)}.time_since_epoch().count()),
                                       std::int64_t(s.timestamp.time_since_epoch().count())};
            if (seen.insert(key).second)
                expected.insert(s.latitude);
        }

        const auto days = split_by_day(in);
        std::multiset<double> got;
        std::set<int> dates;
        for (const auto& t : days) {
            CHECK(dates.insert(int(sys_days{t.day}.time_since_epoch().count())).second);
            for (std::size_t i = 0; i < t.samples.size(); ++i) {
                CHECK(local_date(t.samples[i]) == t.day);
                if (i > 0)
                    CHECK(t.samples[i - 1].timestamp < t.samples[i].timestamp);
                got.insert(t.samples[i].latitude);
            }
        }
        CHECK(got == expected);
        for (std::size_t i = 1; i < days.size(); ++i)
            CHECK(days[i - 1].day < days[i].day);
    }
}

TEST_CASE("ground truth")
{
    const auto g = parse_ground_truth("day,arrival_min,departure_min,lat,lon,label\n2017-03-01,480,540,35.1,33.3,work\n");
    REQUIRE(g.size() == 1);
    CHECK(g[0].day == 2017y / March / 1);
    CHECK(g[0].duration_min() == 60.0);
    CHECK(g[0].latitude == 35.1);
    CHECK(g[0].label == "work");

    CHECK(parse_ground_truth("day,arrival_min,departure_min,lat,lon,label\n").empty());

    auto e = capture([] { parse_ground_truth("day,arrival_min,departure_min,lat,lon,label\n2017-03-01,480,400,35.1,33.3,x\n"); });
    CHECK(e.line() == 2);
    CHECK(e.field() == "departure_min");

    e = capture([] { parse_ground_truth("day,arrival_min,departure_min,lat,lon,label\n2017-03-01,480,1500,35.1,33.3,x\n"); });
    CHECK(e.field() == "departure_min");
    e = capture([] { parse_ground_truth("day,arrival_min,departure_min,lat,lon,label\n2017-03-01,480,500,35.1\n"); });
    CHECK(e.line() == 2);
    e = capture([] { parse_ground_truth("day,arrival_min,departure_min,lat,lon,label\n2017-3-1x,480,500,35.1,33.3,x\n"); });
    CHECK(e.field() == "day");
}

TEST_CASE("ground truth round trip")
{
    const std::vector<GroundTruthStay> in{
        {2017y / March / 1, 0, 62.5, 35.1, 33.3, "home"},
        {2017y / March / 1, 70, 70, -1.25, 179.5, "zero length"},
        {2017y / March / 2, 600.25, 1440, 0, 0, "late"},
    };
    std::ostringstream out;
    write_ground_truth(out, in);
    CHECK(parse_ground_truth(out.str()) == in);
}
