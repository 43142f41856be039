#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace prodnet {

struct IndustryMeta {
    std::string code;
    std::string name;

    bool operator==(const IndustryMeta&) const = default;
};

// Square industry-by-industry requirements matrix.
//
// coefficient(i, j) is the input industry i requires from industry j per
// dollar of i's output. Ingestion keeps the source orientation; edge direction
// is decided when the network is built.
class InputOutputTable {
public:
    InputOutputTable() = default;

    // Validates: square, matching industry count, non-negative finite
    // coefficients, unique non-empty codes.
    InputOutputTable(std::vector<IndustryMeta> industries, std::vector<double> coefficients,
                     int year = 0, std::string source_label = {});

    std::size_t size() const noexcept { return industries_.size(); }
    const std::vector<IndustryMeta>& industries() const noexcept { return industries_; }
    double coefficient(std::size_t i, std::size_t j) const { return coefficients_[i * size() + j]; }
    const std::vector<double>& coefficients() const noexcept { return coefficients_; }
    int year() const noexcept { return year_; }
    const std::string& source_label() const noexcept { return source_label_; }

    // Replaces industry names using a code -> name map; codes missing from the
    // map keep their current name.
    InputOutputTable with_names(const std::unordered_map<std::string, std::string>& names) const;
    InputOutputTable with_labels(int year, std::string source_label) const;

    bool operator==(const InputOutputTable&) const = default;

private:
    std::vector<IndustryMeta> industries_;
    std::vector<double> coefficients_;
    int year_ = 0;
    std::string source_label_;
};

enum class TableFormat { csv, tsv };

// Reads the canonical layout: header row ["code", code_1, ..., code_N], then
// one row per industry [code_i, w_i1, ..., w_iN]. Row codes must repeat the
// header codes in the same order. Blank cells read as 0. Industry names
// default to the code.
InputOutputTable parse_table(std::istream& in, TableFormat format = TableFormat::csv);
InputOutputTable load_table(const std::string& path, TableFormat format = TableFormat::csv);

// Metadata CSV with columns [code, name]; a header row whose first cell is
// "code" is skipped.
std::unordered_map<std::string, std::string> parse_metadata(std::istream& in);
std::unordered_map<std::string, std::string> load_metadata(const std::string& path);

// Canonical CSV with shortest round-trip number formatting.
void write_table(std::ostream& out, const InputOutputTable& table);
void write_metadata(std::ostream& out, const InputOutputTable& table);

struct TableSummary {
    std::size_t industries = 0;
    std::size_t positive_off_diagonal = 0;
    std::size_t positive_diagonal = 0;
    // Over strictly positive off-diagonal cells; zero when there are none.
    double min_positive = 0.0;
    double max_positive = 0.0;
    double mean_positive = 0.0;
};

TableSummary summary(const InputOutputTable& table);

} // namespace prodnet
