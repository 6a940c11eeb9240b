// Qualitative comparison artifacts: histogram + KDE overlays, boxplot
// statistics, dip-direction/dip-angle scatter, and deterministic SVG figures.

#ifndef ROCKGEN_REPORT_HPP
#define ROCKGEN_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

#include "rockgen/types.hpp"

namespace rockgen {

struct HistogramSpec {
    std::string parameter;
    std::vector<double> bin_edges;  // bins + 1 edges spanning the union range
    std::vector<double> observed_counts;
    std::vector<double> generated_counts;
    // Gaussian KDE with Silverman bandwidth, sampled on a shared x grid.
    std::vector<std::pair<double, double>> kde_observed;
    std::vector<std::pair<double, double>> kde_generated;
};

struct BoxplotStats {
    std::string label;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;   // furthest point within 1.5 IQR fences
    double whisker_high = 0.0;
    std::vector<double> outliers;
};

struct ScatterSpec {
    std::vector<std::pair<double, double>> observed;   // (dip_direction, dip_angle)
    std::vector<std::pair<double, double>> generated;
    double pearson_observed = 0.0;
    double pearson_generated = 0.0;
};

HistogramSpec build_histogram(const DiscontinuitySet& observed,
                              const DiscontinuitySet& generated, Parameter parameter,
                              std::size_t bins);

BoxplotStats build_boxplot(const std::vector<double>& values, const std::string& label);

ScatterSpec build_scatter(const DiscontinuitySet& observed,
                          const DiscontinuitySet& generated);

// Deterministic byte output for identical inputs.
std::string render_svg(const HistogramSpec& spec);
std::string render_svg(const std::vector<BoxplotStats>& specs, const std::string& title);
std::string render_svg(const ScatterSpec& spec);

}  // namespace rockgen

#endif
