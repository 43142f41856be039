#include "prodnet/csv.hpp"

#include "prodnet/error.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace prodnet::csv {

Reader::Reader(std::istream& in, char delimiter) : in_(in), delimiter_(delimiter) {}

std::optional<std::vector<std::string>> Reader::next() {
    if (first_) {
        first_ = false;
        if (in_.peek() == 0xEF) {
            std::array<char, 3> bom{};
            in_.read(bom.data(), 3);
            if (!(static_cast<unsigned char>(bom[1]) == 0xBB &&
                  static_cast<unsigned char>(bom[2]) == 0xBF)) {
                for (auto it = bom.rbegin(); it != bom.rend(); ++it)
                    in_.putback(*it);
            }
        }
    }

    while (true) {
        std::vector<std::string> fields;
        std::string field;
        bool in_quotes = false;
        bool any = false;
        record_line_ = line_;
        int c;
        while ((c = in_.get()) != std::char_traits<char>::eof()) {
            any = true;
            const char ch = static_cast<char>(c);
            if (in_quotes) {
                if (ch == '"') {
                    if (in_.peek() == '"') {
                        field.push_back('"');
                        in_.get();
                    } else {
                        in_quotes = false;
                    }
                } else {
                    if (ch == '\n')
                        ++line_;
                    field.push_back(ch);
                }
                continue;
            }
            if (ch == '"') {
                in_quotes = true;
            } else if (ch == delimiter_) {
                fields.push_back(std::move(field));
                field.clear();
            } else if (ch == '\r') {
                if (in_.peek() == '\n')
                    in_.get();
                ++line_;
                break;
            } else if (ch == '\n') {
                ++line_;
                break;
            } else {
                field.push_back(ch);
            }
        }
        if (!any)
            return std::nullopt;
        if (in_quotes)
            throw ShapeError("unterminated quoted field starting on line " +
                                     std::to_string(record_line_));
        fields.push_back(std::move(field));
        if (fields.size() == 1 && fields.front().empty())
            continue;
        return fields;
    }
}

std::string escape(std::string_view field, char delimiter) {
    if (field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"')
            out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out << delimiter;
        out << escape(fields[i], delimiter);
    }
    out << '\n';
}

std::string format_exact(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{})
        throw std::runtime_error("failed to format number");
    return std::string(buf.data(), end);
}

std::string format_report(double value) {
    std::array<char, 64> buf{};
    const int len = std::snprintf(buf.data(), buf.size(), "%.10g", value);
    return std::string(buf.data(), static_cast<std::size_t>(len));
}

double round_report(double value) {
    const std::string text = format_report(value);
    double out = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
}

} // namespace prodnet::csv
