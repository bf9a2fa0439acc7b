#pragma once

#include "staypoint/detector.hpp"

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace staypoint {

/// One JSON object, no trailing newline. Keys: day, start_minute, end_minute,
/// estimated_duration_min, lat, lon, confidence, class.
std::string to_json_line(const StayPoint& sp);

/// Inverse of to_json_line; curve indices are not part of the record and
/// come back as zero. Throws InputError naming the line.
std::vector<StayPoint> read_stay_jsonl(std::istream& in);

void write_stay_csv_header(std::ostream& out);
void write_stay_csv_row(std::ostream& out, const StayPoint& sp);

} // namespace staypoint
