#include "rockgen/types.hpp"

#include <cmath>
#include <set>

#include "rockgen/errors.hpp"

namespace rockgen {

const char* parameter_name(Parameter p) {
    switch (p) {
        case Parameter::DipDirection: return "dip_direction";
        case Parameter::DipAngle: return "dip_angle";
        default: return "trace_length";
    }
}

double normalize_dip_direction(double degrees) {
    double r = std::fmod(degrees, 360.0);
    if (r < 0.0) r += 360.0;
    if (r >= 360.0) r = 0.0;  // fmod can land exactly on 360 after the add
    return r;
}

void validate_record(const DiscontinuityRecord& rec, std::size_t row_index) {
    if (!std::isfinite(rec.dip_direction) || rec.dip_direction < 0.0 ||
        rec.dip_direction >= 360.0) {
        throw InvariantViolation("row " + std::to_string(row_index) +
                                 ": dip_direction " + std::to_string(rec.dip_direction) +
                                 " outside [0, 360)");
    }
    if (!std::isfinite(rec.dip_angle) || rec.dip_angle < 0.0 || rec.dip_angle > 90.0) {
        throw InvariantViolation("row " + std::to_string(row_index) + ": dip_angle " +
                                 std::to_string(rec.dip_angle) + " outside [0, 90]");
    }
    if (!std::isfinite(rec.trace_length) || rec.trace_length <= 0.0) {
        throw InvariantViolation("row " + std::to_string(row_index) + ": trace_length " +
                                 std::to_string(rec.trace_length) + " must be positive");
    }
}

std::vector<double> DiscontinuitySet::column(Parameter p) const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& rec : records) out.push_back(rec.value(p));
    return out;
}

void validate_set(const DiscontinuitySet& set) {
    if (set.records.empty()) throw EmptyFile("set '" + set.name + "' has no records");
    for (std::size_t i = 0; i < set.records.size(); ++i) validate_record(set.records[i], i);
}

}  // namespace rockgen
