#pragma once

// CSV result records: '#'-prefixed "key = value" metadata lines, one header
// row, comma-separated cells. Numbers are stored as 12-significant-digit
// text at insertion, so parse(emit(r)) == r holds exactly.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tdlpt {

inline constexpr const char* kCodeVersion = "0.1.0";
inline constexpr const char* kCsvSchema = "tdlpt-csv/1";

/// 12 significant digits, classic locale; "nan" / "inf" spelled out.
std::string format_number(double value);

class RecordError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ResultRecord {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_meta(const std::string& key, const std::string& value);
    void add_row(std::vector<std::string> cells);
    void add_numeric_row(const std::vector<double>& values);

    std::size_t column(const std::string& name) const;  // throws RecordError
    double number(std::size_t row, const std::string& name) const;
    std::string meta(const std::string& key) const;  // throws RecordError

    bool operator==(const ResultRecord& other) const = default;
};

/// Record with the schema tag, code version and the config snapshot as
/// metadata, followed by `columns`.
ResultRecord make_record(const std::vector<std::pair<std::string, std::string>>& config_snapshot,
                         std::vector<std::string> columns);

void emit(const ResultRecord& record, std::ostream& out);
std::string emit(const ResultRecord& record);
ResultRecord parse_record(std::istream& in);
ResultRecord parse_record(const std::string& text);

void write_record_file(const ResultRecord& record, const std::string& path);
ResultRecord read_record_file(const std::string& path);

}  // namespace tdlpt
