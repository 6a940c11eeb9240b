// CSV ingestion and emission for discontinuity tables.
//
// Format: UTF-8, comma separated, header row required, '.' decimal point.
// Column names are configurable; defaults match the canonical schema.

#ifndef ROCKGEN_CSV_HPP
#define ROCKGEN_CSV_HPP

#include <string>

#include "rockgen/types.hpp"

namespace rockgen {

struct ColumnMap {
    std::string dip_direction = "dip_direction";
    std::string dip_angle = "dip_angle";
    std::string trace_length = "trace_length";
};

// Parses and validates a discontinuity CSV. Row order is preserved;
// dip_direction is reduced into [0, 360) before validation.
DiscontinuitySet parse_csv(const std::string& path, const ColumnMap& columns = {});

// Writes the canonical three-column schema, shortest round-trip doubles.
void write_csv(const DiscontinuitySet& set, const std::string& path);

// Data rows in a CSV file (header excluded); used for catalog cross-checks.
std::size_t count_csv_rows(const std::string& path);

}  // namespace rockgen

#endif
