#include "tdlpt/records.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tdlpt {

namespace {

void check_cell(const std::string& s, const char* what) {
    if (s.find_first_of(",\n\r") != std::string::npos) {
        throw RecordError(std::string(what) + " must not contain commas or line breaks: '" + s + "'");
    }
}

void check_meta(const std::string& key, const std::string& value) {
    if (key.empty() || key.find_first_of("=\n\r#") != std::string::npos || key.front() == ' ' ||
        key.back() == ' ') {
        throw RecordError("bad metadata key '" + key + "'");
    }
    if (value.find_first_of("\n\r") != std::string::npos || (!value.empty() && value.front() == ' ')) {
        throw RecordError("bad metadata value for '" + key + "'");
    }
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";  // no "-0"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void ResultRecord::add_meta(const std::string& key, const std::string& value) {
    check_meta(key, value);
    metadata.emplace_back(key, value);
}

void ResultRecord::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size()) throw RecordError("row width does not match the header");
    for (const auto& c : cells) check_cell(c, "cell");
    rows.push_back(std::move(cells));
}

void ResultRecord::add_numeric_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    add_row(std::move(cells));
}

std::size_t ResultRecord::column(const std::string& name) const {
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (columns[k] == name) return k;
    }
    throw RecordError("no column '" + name + "'");
}

double ResultRecord::number(std::size_t row, const std::string& name) const {
    const std::string& cell = rows.at(row).at(column(name));
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') throw RecordError("cell '" + cell + "' is not a number");
    return v;
}

std::string ResultRecord::meta(const std::string& key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) return v;
    }
    throw RecordError("no metadata key '" + key + "'");
}

ResultRecord make_record(const std::vector<std::pair<std::string, std::string>>& config_snapshot,
                         std::vector<std::string> columns) {
    ResultRecord r;
    r.add_meta("schema", kCsvSchema);
    r.add_meta("code_version", kCodeVersion);
    for (const auto& [k, v] : config_snapshot) r.add_meta("config." + k, v);
    for (const auto& c : columns) check_cell(c, "column name");
    r.columns = std::move(columns);
    return r;
}

void emit(const ResultRecord& record, std::ostream& out) {
    for (const auto& [k, v] : record.metadata) out << "# " << k << " = " << v << '\n';
    for (std::size_t k = 0; k < record.columns.size(); ++k) out << (k ? "," : "") << record.columns[k];
    out << '\n';
    for (const auto& row : record.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
        out << '\n';
    }
}

std::string emit(const ResultRecord& record) {
    std::ostringstream out;
    emit(record, out);
    return out.str();
}

ResultRecord parse_record(std::istream& in) {
    ResultRecord r;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!have_header && !line.empty() && line.front() == '#') {
            const auto eq = line.find(" = ");
            if (line.size() < 2 || line[1] != ' ' || eq == std::string::npos) {
                throw RecordError("malformed metadata line '" + line + "'");
            }
            r.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 3));
            continue;
        }
        if (!have_header) {
            r.columns = split_cells(line);
            have_header = true;
            continue;
        }
        auto cells = split_cells(line);
        if (cells.size() != r.columns.size()) throw RecordError("row width does not match the header");
        r.rows.push_back(std::move(cells));
    }
    if (!have_header) throw RecordError("record has no header row");
    return r;
}

ResultRecord parse_record(const std::string& text) {
    std::istringstream in(text);
    return parse_record(in);
}

void write_record_file(const ResultRecord& record, const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RecordError("cannot write '" + path + "'");
    emit(record, out);
    if (!out) throw RecordError("write failed for '" + path + "'");
}

ResultRecord read_record_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RecordError("cannot read '" + path + "'");
    return parse_record(in);
}

}  // namespace tdlpt
