#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace prodnet::csv {

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line
// endings. A UTF-8 byte-order mark at the start of the stream is skipped.
class Reader {
public:
    Reader(std::istream& in, char delimiter = ',');

    // Next record, or nullopt at end of stream. Completely empty lines are
    // skipped.
    std::optional<std::vector<std::string>> next();

    // 1-based line number where the last returned record started.
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    char delimiter_;
    std::size_t line_ = 1;
    std::size_t record_line_ = 0;
    bool first_ = true;
};

// Quotes a field when it contains the delimiter, a quote, or a line break.
std::string escape(std::string_view field, char delimiter = ',');

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter = ',');

// Shortest decimal representation that parses back to the same double.
std::string format_exact(double value);

// %.10g, the precision used in reports.
std::string format_report(double value);

// Rounds to 10 significant digits (value of format_report parsed back).
double round_report(double value);

} // namespace prodnet::csv
