#include "prodnet/ingest.hpp"

#include "prodnet/csv.hpp"
#include "prodnet/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <unordered_set>

namespace prodnet {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

// Accepts plain decimals and exponents; BEA exports sometimes carry thousands
// separators which are not valid here.
double parse_cell(std::string_view raw, std::size_t row, std::size_t column) {
    const auto text = trim(raw);
    if (text.empty())
        return 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (*begin == '+')
        ++begin;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw ValueError("non-numeric cell '" + std::string(text) + "' at row " +
                             std::to_string(row) + ", column " + std::to_string(column),
                         row, column);
    }
    if (value < 0.0) {
        throw ValueError("negative cell " + std::string(text) + " at row " + std::to_string(row) +
                             ", column " + std::to_string(column),
                         row, column);
    }
    return value;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::ios_base::failure("cannot open " + path);
    return in;
}

} // namespace

InputOutputTable::InputOutputTable(std::vector<IndustryMeta> industries,
                                   std::vector<double> coefficients, int year,
                                   std::string source_label)
    : industries_(std::move(industries)),
      coefficients_(std::move(coefficients)),
      year_(year),
      source_label_(std::move(source_label)) {
    const std::size_t n = industries_.size();
    if (coefficients_.size() != n * n) {
        throw ShapeError("coefficient matrix has " + std::to_string(coefficients_.size()) +
                         " cells, expected " + std::to_string(n) + "x" + std::to_string(n));
    }
    std::unordered_set<std::string> seen;
    for (const auto& meta : industries_) {
        if (meta.code.empty())
            throw ShapeError("empty industry code");
        if (!seen.insert(meta.code).second)
            throw DuplicateCodeError("duplicate industry code '" + meta.code + "'", meta.code);
    }
    for (std::size_t k = 0; k < coefficients_.size(); ++k) {
        const double w = coefficients_[k];
        if (!std::isfinite(w) || w < 0.0) {
            throw ValueError("invalid coefficient at row " + std::to_string(k / n + 2) +
                                 ", column " + std::to_string(k % n + 2),
                             k / n + 2, k % n + 2);
        }
    }
}

InputOutputTable InputOutputTable::with_names(
    const std::unordered_map<std::string, std::string>& names) const {
    auto industries = industries_;
    for (auto& meta : industries) {
        if (auto it = names.find(meta.code); it != names.end())
            meta.name = it->second;
    }
    return InputOutputTable(std::move(industries), coefficients_, year_, source_label_);
}

InputOutputTable InputOutputTable::with_labels(int year, std::string source_label) const {
    return InputOutputTable(industries_, coefficients_, year, std::move(source_label));
}

InputOutputTable parse_table(std::istream& in, TableFormat format) {
    csv::Reader reader(in, format == TableFormat::tsv ? '\t' : ',');

    auto header = reader.next();
    if (!header)
        throw ShapeError("empty table");
    if (header->size() < 2)
        throw ShapeError("header row has no industry codes");

    std::vector<IndustryMeta> industries;
    std::unordered_set<std::string> seen;
    for (std::size_t c = 1; c < header->size(); ++c) {
        std::string code(trim((*header)[c]));
        if (code.empty())
            throw ShapeError("empty industry code in header column " + std::to_string(c + 1));
        if (!seen.insert(code).second)
            throw DuplicateCodeError("duplicate industry code '" + code + "' in header", code);
        industries.push_back({code, code});
    }
    const std::size_t n = industries.size();

    std::vector<double> coefficients;
    coefficients.reserve(n * n);
    std::size_t rows = 0;
    while (auto record = reader.next()) {
        const std::size_t line = reader.line();
        // Trailing empty cells from spreadsheet exports are tolerated.
        while (record->size() > n + 1 && trim(record->back()).empty())
            record->pop_back();
        if (record->size() != n + 1) {
            throw ShapeError("row " + std::to_string(line) + " has " +
                             std::to_string(record->size() - 1) + " values, expected " +
                             std::to_string(n));
        }
        if (rows >= n)
            throw ShapeError("table has more than " + std::to_string(n) + " body rows");
        const std::string code(trim(record->front()));
        if (code != industries[rows].code) {
            if (std::find_if(industries.begin(), industries.begin() + static_cast<long>(rows),
                             [&](const IndustryMeta& m) { return m.code == code; }) !=
                industries.begin() + static_cast<long>(rows)) {
                throw DuplicateCodeError("duplicate industry code '" + code + "' in row " +
                                             std::to_string(line),
                                         code);
            }
            throw ShapeError("row " + std::to_string(line) + " code '" + code +
                             "' does not match header code '" + industries[rows].code + "'");
        }
        for (std::size_t c = 1; c <= n; ++c)
            coefficients.push_back(parse_cell((*record)[c], line, c + 1));
        ++rows;
    }
    if (rows != n) {
        throw ShapeError("table body has " + std::to_string(rows) + " rows, expected " +
                         std::to_string(n));
    }
    return InputOutputTable(std::move(industries), std::move(coefficients));
}

InputOutputTable load_table(const std::string& path, TableFormat format) {
    auto in = open_input(path);
    return parse_table(in, format).with_labels(0, path);
}

std::unordered_map<std::string, std::string> parse_metadata(std::istream& in) {
    csv::Reader reader(in);
    std::unordered_map<std::string, std::string> names;
    bool first = true;
    while (auto record = reader.next()) {
        if (record->size() < 2)
            throw ShapeError("metadata row " + std::to_string(reader.line()) +
                             " needs [code, name]");
        const std::string code(trim((*record)[0]));
        const std::string name(trim((*record)[1]));
        if (first && code == "code") {
            first = false;
            continue;
        }
        first = false;
        if (!names.emplace(code, name).second) {
            throw DuplicateCodeError("duplicate industry code '" + code + "' in metadata", code);
        }
    }
    return names;
}

std::unordered_map<std::string, std::string> load_metadata(const std::string& path) {
    auto in = open_input(path);
    return parse_metadata(in);
}

void write_table(std::ostream& out, const InputOutputTable& table) {
    const std::size_t n = table.size();
    std::vector<std::string> row;
    row.reserve(n + 1);
    row.emplace_back("code");
    for (const auto& meta : table.industries())
        row.push_back(meta.code);
    csv::write_row(out, row);
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        row.push_back(table.industries()[i].code);
        for (std::size_t j = 0; j < n; ++j)
            row.push_back(csv::format_exact(table.coefficient(i, j)));
        csv::write_row(out, row);
    }
}

void write_metadata(std::ostream& out, const InputOutputTable& table) {
    csv::write_row(out, {"code", "name"});
    for (const auto& meta : table.industries())
        csv::write_row(out, {meta.code, meta.name});
}

TableSummary summary(const InputOutputTable& table) {
    TableSummary s;
    s.industries = table.size();
    double total = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        for (std::size_t j = 0; j < table.size(); ++j) {
            const double w = table.coefficient(i, j);
            if (w <= 0.0)
                continue;
            if (i == j) {
                ++s.positive_diagonal;
                continue;
            }
            ++s.positive_off_diagonal;
            total += w;
            lo = std::min(lo, w);
            hi = std::max(hi, w);
        }
    }
    if (s.positive_off_diagonal > 0) {
        s.min_positive = lo;
        s.max_positive = hi;
        s.mean_positive = total / static_cast<double>(s.positive_off_diagonal);
    }
    return s;
}

} // namespace prodnet
