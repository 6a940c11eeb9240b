#include "rockgen/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "rockgen/errors.hpp"

namespace rockgen {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_cell(const std::string& raw, std::size_t row, const std::string& col) {
    const std::string cell = trim(raw);
    if (cell.empty()) {
        throw UnparseableCell("row " + std::to_string(row) + ", column '" + col +
                              "': empty cell");
    }
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw UnparseableCell("row " + std::to_string(row) + ", column '" + col + "': '" +
                              cell + "' is not a number");
    }
    return value;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name,
                        const std::string& path) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == name) return i;
    }
    throw MissingColumn("column '" + name + "' not found in " + path);
}

void format_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    out.append(buf, ptr);
}

}  // namespace

DiscontinuitySet parse_csv(const std::string& path, const ColumnMap& columns) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyFile(path + " is empty");
    const auto header = split_fields(line);

    const std::size_t idx_dir = find_column(header, columns.dip_direction, path);
    const std::size_t idx_ang = find_column(header, columns.dip_angle, path);
    const std::size_t idx_len = find_column(header, columns.trace_length, path);

    DiscontinuitySet set;
    set.name = path;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        const auto fields = split_fields(line);
        const std::size_t needed = std::max({idx_dir, idx_ang, idx_len}) + 1;
        if (fields.size() < needed) {
            throw UnparseableCell("row " + std::to_string(row) + ": expected at least " +
                                  std::to_string(needed) + " fields, got " +
                                  std::to_string(fields.size()));
        }
        DiscontinuityRecord rec;
        rec.dip_direction = normalize_dip_direction(
            parse_cell(fields[idx_dir], row, columns.dip_direction));
        rec.dip_angle = parse_cell(fields[idx_ang], row, columns.dip_angle);
        rec.trace_length = parse_cell(fields[idx_len], row, columns.trace_length);
        validate_record(rec, row);
        set.records.push_back(rec);
    }
    if (set.records.empty()) throw EmptyFile(path + " has a header but no data rows");
    return set;
}

void write_csv(const DiscontinuitySet& set, const std::string& path) {
    std::string out = "dip_direction,dip_angle,trace_length\n";
    for (const auto& rec : set.records) {
        format_double(out, rec.dip_direction);
        out.push_back(',');
        format_double(out, rec.dip_angle);
        out.push_back(',');
        format_double(out, rec.trace_length);
        out.push_back('\n');
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot write " + path);
    file << out;
}

std::size_t count_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) return 0;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) ++rows;
    }
    return rows;
}

}  // namespace rockgen
