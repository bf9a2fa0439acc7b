#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace staypoint::detail {

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double value)
{
    char buffer[32];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{})
        return std::to_string(value);
    return std::string(buffer, end);
}

inline std::optional<double> parse_double(std::string_view text)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
        text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
        text.remove_suffix(1);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    if (text.empty())
        return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        return std::nullopt;
    return value;
}

inline std::string_view trim_line_end(std::string_view line)
{
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
        line.remove_suffix(1);
    return line;
}

/// Splits on commas. The last field keeps any remaining commas when
/// `max_fields` is reached.
inline std::vector<std::string_view> split_csv(std::string_view line, std::size_t max_fields = 0)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        if (max_fields != 0 && fields.size() + 1 == max_fields) {
            fields.push_back(line.substr(start));
            break;
        }
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

} // namespace staypoint::detail
