// Core domain types: discontinuity records, sets, and the dataset catalog.

#ifndef ROCKGEN_TYPES_HPP
#define ROCKGEN_TYPES_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace rockgen {

// The three modeled parameters, in canonical column order.
enum class Parameter { DipDirection = 0, DipAngle = 1, TraceLength = 2 };

inline constexpr std::array<Parameter, 3> kParameters = {
    Parameter::DipDirection, Parameter::DipAngle, Parameter::TraceLength};

const char* parameter_name(Parameter p);

struct DiscontinuityRecord {
    double dip_direction = 0.0;  // degrees, [0, 360)
    double dip_angle = 0.0;      // degrees, [0, 90]
    double trace_length = 0.0;   // meters, > 0

    double value(Parameter p) const {
        switch (p) {
            case Parameter::DipDirection: return dip_direction;
            case Parameter::DipAngle: return dip_angle;
            default: return trace_length;
        }
    }
};

// Reduces an arbitrary azimuth into [0, 360).
double normalize_dip_direction(double degrees);

// Throws InvariantViolation naming the offending row/field.
void validate_record(const DiscontinuityRecord& rec, std::size_t row_index);

struct Provenance {
    enum class Kind { Observed, Generated };
    Kind kind = Kind::Observed;
    std::string engine;       // engine tag for Generated sets
    std::uint64_t seed = 0;
};

struct DiscontinuitySet {
    std::string name;
    std::string location;
    int group_id = 0;
    std::vector<DiscontinuityRecord> records;
    Provenance source;

    std::size_t size() const { return records.size(); }
    std::vector<double> column(Parameter p) const;
};

// Throws InvariantViolation / EmptyFile on a malformed set.
void validate_set(const DiscontinuitySet& set);

struct CatalogEntry {
    std::string name;
    std::string location;
    int group_id = 0;
    std::string path;           // dataset CSV, relative to the manifest
    std::size_t expected_count = 0;
    std::string scenario;       // "I" | "II" | "III" | "IV"
};

struct DatasetCatalog {
    std::vector<CatalogEntry> entries;
};

}  // namespace rockgen

#endif
