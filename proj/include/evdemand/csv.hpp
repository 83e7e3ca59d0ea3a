#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace evdemand {

// Minimal RFC-4180-ish CSV reader: comma separated, optional double-quoted
// fields with "" escapes, tolerant of CRLF line endings.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Reads the next row into `fields`. Returns false at end of input.
    bool next(std::vector<std::string>& fields);

    // 1-based line number of the row most recently returned.
    std::size_t line() const { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void row(const std::vector<std::string>& fields);

private:
    std::ostream& out_;
};

// Shortest representation that parses back to the identical double.
std::string format_double(double v);

// Strict numeric parsing; returns nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace evdemand
