#include "staypoint/stay_records.hpp"

#include "text_util.hpp"

#include "json.hpp"

#include <string>

namespace staypoint {

std::string to_json_line(const StayPoint& sp)
{
    nlohmann::ordered_json j;
    j["day"] = format_date(sp.day);
    j["start_minute"] = sp.start_minute;
    j["end_minute"] = sp.end_minute;
    j["estimated_duration_min"] = sp.estimated_duration_min;
    j["lat"] = sp.latitude;
    j["lon"] = sp.longitude;
    j["confidence"] = sp.confidence;
    j["class"] = std::string(to_string(sp.cls));
    return j.dump();
}

std::vector<StayPoint> read_stay_jsonl(std::istream& in)
{
    std::vector<StayPoint> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto text = detail::trim_line_end(line);
        if (text.find_first_not_of(" \t") == std::string_view::npos)
            continue;
        const auto j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw InputError(number, "", "not a JSON object");
        const auto num = [&](const char* key) {
            const auto it = j.find(key);
            if (it == j.end() || !it->is_number())
                throw InputError(number, key, std::string("missing or non-numeric '") + key + "'");
            return it->get<double>();
        };
        const auto str = [&](const char* key) {
            const auto it = j.find(key);
            if (it == j.end() || !it->is_string())
                throw InputError(number, key, std::string("missing '") + key + "'");
            return it->get<std::string>();
        };
        StayPoint sp;
        try {
            sp.day = parse_date(str("day"));
            sp.cls = stay_class_from_string(str("class"));
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            throw InputError(number, "", e.what());
        }
        sp.start_minute = num("start_minute");
        sp.end_minute = num("end_minute");
        sp.estimated_duration_min = num("estimated_duration_min");
        sp.latitude = num("lat");
        sp.longitude = num("lon");
        sp.confidence = num("confidence");
        out.push_back(sp);
    }
    return out;
}

void write_stay_csv_header(std::ostream& out)
{
    out << "day,start_minute,end_minute,estimated_duration_min,lat,lon,confidence,class\n";
}

void write_stay_csv_row(std::ostream& out, const StayPoint& sp)
{
    using detail::format_double;
    out << format_date(sp.day) << ',' << format_double(sp.start_minute) << ',' << format_double(sp.end_minute) << ','
        << format_double(sp.estimated_duration_min) << ',' << format_double(sp.latitude) << ','
        << format_double(sp.longitude) << ',' << format_double(sp.confidence) << ',' << to_string(sp.cls) << '\n';
}

} // namespace staypoint
