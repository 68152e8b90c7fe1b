#include "spatnet/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>

#include "spatnet/error.hpp"

namespace spatnet::csv {

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

bool read_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

namespace {

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, const char* what) {
    T value{};
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    const auto result = std::from_chars(begin, end, value);
    if (field.empty() || result.ec != std::errc{} || result.ptr != end) {
        throw ParseError(line_no, std::string("expected ") + what + ", got '" +
                                      std::string(field) + "'");
    }
    return value;
}

}  // namespace

double parse_double(std::string_view field, std::size_t line_no) {
    const auto value = parse_number<double>(field, line_no, "a number");
    if (!std::isfinite(value)) throw ParseError(line_no, "non-finite number");
    return value;
}

std::int64_t parse_int(std::string_view field, std::size_t line_no) {
    return parse_number<std::int64_t>(field, line_no, "an integer");
}

std::uint64_t parse_uint(std::string_view field, std::size_t line_no) {
    if (!field.empty() && field.front() == '-') {
        throw ParseError(line_no, "negative value '" + std::string(field) + "'");
    }
    return parse_number<std::uint64_t>(field, line_no, "a non-negative integer");
}

}  // namespace spatnet::csv
