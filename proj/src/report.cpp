#include "rockgen/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "rockgen/errors.hpp"
#include "rockgen/metrics.hpp"
#include "rockgen/stats.hpp"

namespace rockgen {
namespace {

double silverman_bw(const std::vector<double>& xs) {
    const double sd = population_std(xs);
    const double bw = 1.06 * sd * std::pow(static_cast<double>(xs.size()), -0.2);
    return bw > 0.0 ? bw : 1.0;  // degenerate sample: arbitrary positive width
}

std::vector<std::pair<double, double>> kde_curve(const std::vector<double>& xs,
                                                 double lo, double hi,
                                                 std::size_t points = 201) {
    const double bw = silverman_bw(xs);
    const double inv = 1.0 / (bw * std::sqrt(2.0 * M_PI) * static_cast<double>(xs.size()));
    std::vector<std::pair<double, double>> curve;
    curve.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(points - 1);
        double density = 0.0;
        for (double s : xs) {
            const double z = (x - s) / bw;
            density += std::exp(-0.5 * z * z);
        }
        curve.emplace_back(x, density * inv);
    }
    return curve;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

struct SvgCanvas {
    std::string body;
    double width = 640.0;
    double height = 420.0;
    double ml = 60.0, mr = 20.0, mt = 40.0, mb = 45.0;
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;  // data ranges

    double px(double x) const {
        return ml + (x - x0) / (x1 - x0) * (width - ml - mr);
    }
    double py(double y) const {
        return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb);
    }

    void open(const std::string& title) {
        body += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
                "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " +
                fmt(height) + "\">\n";
        body += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        body += "<text x=\"" + fmt(width / 2) +
                "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                "font-size=\"15\">" + title + "</text>\n";
    }

    void axes(const std::string& xlabel, const std::string& ylabel) {
        body += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(height - mb) + "\" x2=\"" +
                fmt(width - mr) + "\" y2=\"" + fmt(height - mb) +
                "\" stroke=\"black\"/>\n";
        body += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(ml) +
                "\" y2=\"" + fmt(height - mb) + "\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 4; ++i) {
            const double xv = x0 + (x1 - x0) * i / 4.0;
            const double yv = y0 + (y1 - y0) * i / 4.0;
            body += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(height - mb + 16) +
                    "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                    "font-size=\"10\">" + fmt(xv) + "</text>\n";
            body += "<text x=\"" + fmt(ml - 6) + "\" y=\"" + fmt(py(yv) + 3) +
                    "\" text-anchor=\"end\" font-family=\"sans-serif\" "
                    "font-size=\"10\">" + fmt(yv) + "</text>\n";
        }
        body += "<text x=\"" + fmt((ml + width - mr) / 2) + "\" y=\"" +
                fmt(height - 8) +
                "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                "font-size=\"12\">" + xlabel + "</text>\n";
        body += "<text x=\"14\" y=\"" + fmt((mt + height - mb) / 2) +
                "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
                "transform=\"rotate(-90 14 " + fmt((mt + height - mb) / 2) + ")\">" +
                ylabel + "</text>\n";
    }

    void legend(bool with_generated) {
        const double lx = width - mr - 150.0;
        body += "<rect x=\"" + fmt(lx) + "\" y=\"" + fmt(mt + 4) +
                "\" width=\"12\" height=\"12\" fill=\"#4878a8\" opacity=\"0.6\"/>\n";
        body += "<text x=\"" + fmt(lx + 18) + "\" y=\"" + fmt(mt + 14) +
                "\" font-family=\"sans-serif\" font-size=\"11\">observed</text>\n";
        if (with_generated) {
            body += "<rect x=\"" + fmt(lx) + "\" y=\"" + fmt(mt + 22) +
                    "\" width=\"12\" height=\"12\" fill=\"#d2691e\" opacity=\"0.6\"/>\n";
            body += "<text x=\"" + fmt(lx + 18) + "\" y=\"" + fmt(mt + 32) +
                    "\" font-family=\"sans-serif\" font-size=\"11\">generated</text>\n";
        }
    }

    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& color) {
        body += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : pts) body += fmt(px(x)) + "," + fmt(py(y)) + " ";
        body += "\"/>\n";
    }

    std::string close() {
        body += "</svg>\n";
        return body;
    }
};

}  // namespace

HistogramSpec build_histogram(const DiscontinuitySet& observed,
                              const DiscontinuitySet& generated, Parameter parameter,
                              std::size_t bins) {
    if (bins < 2) throw Error("build_histogram needs at least 2 bins");
    HistogramSpec spec;
    spec.parameter = parameter_name(parameter);

    const auto obs = observed.column(parameter);
    const auto gen = generated.records.empty() ? std::vector<double>{}
                                               : generated.column(parameter);

    double lo = *std::min_element(obs.begin(), obs.end());
    double hi = *std::max_element(obs.begin(), obs.end());
    if (!gen.empty()) {
        lo = std::min(lo, *std::min_element(gen.begin(), gen.end()));
        hi = std::max(hi, *std::max_element(gen.begin(), gen.end()));
    }
    if (lo == hi) {  // degenerate: widen so the single value occupies one bin
        lo -= 0.5;
        hi += 0.5;
    }

    spec.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        spec.bin_edges[i] = lo + (hi - lo) * static_cast<double>(i) /
                                     static_cast<double>(bins);
    }

    auto count = [&](const std::vector<double>& xs) {
        std::vector<double> counts(bins, 0.0);
        const double width = (hi - lo) / static_cast<double>(bins);
        for (double x : xs) {
            std::size_t bin = static_cast<std::size_t>((x - lo) / width);
            if (bin >= bins) bin = bins - 1;  // top edge inclusive
            counts[bin] += 1.0;
        }
        return counts;
    };
    spec.observed_counts = count(obs);
    spec.generated_counts = gen.empty() ? std::vector<double>(bins, 0.0) : count(gen);

    // KDE support extended past the data so the density integrates to ~1.
    const double pad = 3.0 * std::max(silverman_bw(obs),
                                      gen.empty() ? 0.0 : silverman_bw(gen));
    spec.kde_observed = kde_curve(obs, lo - pad, hi + pad);
    if (!gen.empty()) spec.kde_generated = kde_curve(gen, lo - pad, hi + pad);
    return spec;
}

BoxplotStats build_boxplot(const std::vector<double>& values, const std::string& label) {
    if (values.empty()) throw EmptySample("build_boxplot needs a non-empty set");
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());

    BoxplotStats stats;
    stats.label = label;
    stats.q1 = quantile_sorted(sorted, 0.25);
    stats.median = quantile_sorted(sorted, 0.5);
    stats.q3 = quantile_sorted(sorted, 0.75);
    const double iqr = stats.q3 - stats.q1;
    const double lo_fence = stats.q1 - 1.5 * iqr;
    const double hi_fence = stats.q3 + 1.5 * iqr;

    stats.whisker_low = stats.q1;
    stats.whisker_high = stats.q3;
    for (double x : sorted) {
        if (x >= lo_fence) {
            stats.whisker_low = x;
            break;
        }
    }
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        if (*it <= hi_fence) {
            stats.whisker_high = *it;
            break;
        }
    }
    for (double x : sorted) {
        if (x < lo_fence || x > hi_fence) stats.outliers.push_back(x);
    }
    return stats;
}

ScatterSpec build_scatter(const DiscontinuitySet& observed,
                          const DiscontinuitySet& generated) {
    ScatterSpec spec;
    for (const auto& r : observed.records) {
        spec.observed.emplace_back(r.dip_direction, r.dip_angle);
    }
    for (const auto& r : generated.records) {
        spec.generated.emplace_back(r.dip_direction, r.dip_angle);
    }
    spec.pearson_observed = pearson(observed.column(Parameter::DipDirection),
                                    observed.column(Parameter::DipAngle));
    if (!generated.records.empty()) {
        spec.pearson_generated = pearson(generated.column(Parameter::DipDirection),
                                         generated.column(Parameter::DipAngle));
    }
    return spec;
}

std::string render_svg(const HistogramSpec& spec) {
    SvgCanvas c;
    c.x0 = spec.kde_observed.empty() ? spec.bin_edges.front()
                                     : spec.kde_observed.front().first;
    c.x1 = spec.kde_observed.empty() ? spec.bin_edges.back()
                                     : spec.kde_observed.back().first;

    const double n_obs = std::accumulate(spec.observed_counts.begin(),
                                         spec.observed_counts.end(), 0.0);
    const double n_gen = std::accumulate(spec.generated_counts.begin(),
                                         spec.generated_counts.end(), 0.0);
    const double bin_w = spec.bin_edges[1] - spec.bin_edges[0];

    // Densities, so bars and KDE curves share one y scale.
    double ymax = 0.0;
    for (std::size_t i = 0; i < spec.observed_counts.size(); ++i) {
        ymax = std::max(ymax, spec.observed_counts[i] / (n_obs * bin_w));
        if (n_gen > 0.0) {
            ymax = std::max(ymax, spec.generated_counts[i] / (n_gen * bin_w));
        }
    }
    for (const auto& [x, d] : spec.kde_observed) ymax = std::max(ymax, d);
    for (const auto& [x, d] : spec.kde_generated) ymax = std::max(ymax, d);
    c.y0 = 0.0;
    c.y1 = ymax * 1.05;

    c.open("histogram: " + spec.parameter);
    c.axes(spec.parameter, "density");
    auto bars = [&](const std::vector<double>& counts, double n,
                    const std::string& color) {
        if (n <= 0.0) return;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            const double d = counts[i] / (n * bin_w);
            if (d <= 0.0) continue;
            const double x_left = c.px(spec.bin_edges[i]);
            const double x_right = c.px(spec.bin_edges[i + 1]);
            c.body += "<rect x=\"" + fmt(x_left) + "\" y=\"" + fmt(c.py(d)) +
                      "\" width=\"" + fmt(x_right - x_left) + "\" height=\"" +
                      fmt(c.py(0.0) - c.py(d)) + "\" fill=\"" + color +
                      "\" opacity=\"0.45\"/>\n";
        }
    };
    bars(spec.observed_counts, n_obs, "#4878a8");
    bars(spec.generated_counts, n_gen, "#d2691e");
    c.polyline(spec.kde_observed, "#2c4f78");
    if (!spec.kde_generated.empty()) c.polyline(spec.kde_generated, "#a0522d");
    c.legend(n_gen > 0.0);
    return c.close();
}

std::string render_svg(const std::vector<BoxplotStats>& specs, const std::string& title) {
    if (specs.empty()) throw EmptySample("render_svg needs at least one boxplot");
    SvgCanvas c;
    c.x0 = 0.0;
    c.x1 = static_cast<double>(specs.size());
    double lo = specs[0].whisker_low, hi = specs[0].whisker_high;
    for (const auto& s : specs) {
        lo = std::min({lo, s.whisker_low,
                       s.outliers.empty() ? s.whisker_low
                                          : *std::min_element(s.outliers.begin(),
                                                              s.outliers.end())});
        hi = std::max({hi, s.whisker_high,
                       s.outliers.empty() ? s.whisker_high
                                          : *std::max_element(s.outliers.begin(),
                                                              s.outliers.end())});
    }
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    c.y0 = lo - pad;
    c.y1 = hi + pad;

    c.open("boxplot: " + title);
    c.axes("", "value");
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& s = specs[i];
        const double xc = static_cast<double>(i) + 0.5;
        const double half = 0.28;
        const std::string color = i == 0 ? "#4878a8" : "#d2691e";
        c.body += "<rect x=\"" + fmt(c.px(xc - half)) + "\" y=\"" + fmt(c.py(s.q3)) +
                  "\" width=\"" + fmt(c.px(xc + half) - c.px(xc - half)) +
                  "\" height=\"" + fmt(c.py(s.q1) - c.py(s.q3)) + "\" fill=\"" + color +
                  "\" opacity=\"0.45\" stroke=\"black\"/>\n";
        c.body += "<line x1=\"" + fmt(c.px(xc - half)) + "\" y1=\"" + fmt(c.py(s.median)) +
                  "\" x2=\"" + fmt(c.px(xc + half)) + "\" y2=\"" + fmt(c.py(s.median)) +
                  "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        for (double w : {s.whisker_low, s.whisker_high}) {
            const double box_edge = w <= s.q1 ? s.q1 : s.q3;
            c.body += "<line x1=\"" + fmt(c.px(xc)) + "\" y1=\"" + fmt(c.py(box_edge)) +
                      "\" x2=\"" + fmt(c.px(xc)) + "\" y2=\"" + fmt(c.py(w)) +
                      "\" stroke=\"black\"/>\n";
            c.body += "<line x1=\"" + fmt(c.px(xc - half / 2)) + "\" y1=\"" + fmt(c.py(w)) +
                      "\" x2=\"" + fmt(c.px(xc + half / 2)) + "\" y2=\"" + fmt(c.py(w)) +
                      "\" stroke=\"black\"/>\n";
        }
        for (double o : s.outliers) {
            c.body += "<circle cx=\"" + fmt(c.px(xc)) + "\" cy=\"" + fmt(c.py(o)) +
                      "\" r=\"2\" fill=\"none\" stroke=\"black\"/>\n";
        }
        c.body += "<text x=\"" + fmt(c.px(xc)) + "\" y=\"" + fmt(c.height - c.mb + 16) +
                  "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
                  "font-size=\"11\">" + s.label + "</text>\n";
    }
    return c.close();
}

std::string render_svg(const ScatterSpec& spec) {
    SvgCanvas c;
    c.x0 = 0.0;
    c.x1 = 360.0;
    c.y0 = 0.0;
    c.y1 = 90.0;
    c.open("dip direction vs dip angle");
    c.axes("dip_direction (deg)", "dip_angle (deg)");
    for (const auto& [x, y] : spec.observed) {
        c.body += "<circle cx=\"" + fmt(c.px(x)) + "\" cy=\"" + fmt(c.py(y)) +
                  "\" r=\"2\" fill=\"#4878a8\" opacity=\"0.55\"/>\n";
    }
    for (const auto& [x, y] : spec.generated) {
        c.body += "<circle cx=\"" + fmt(c.px(x)) + "\" cy=\"" + fmt(c.py(y)) +
                  "\" r=\"2\" fill=\"#d2691e\" opacity=\"0.55\"/>\n";
    }
    c.body += "<text x=\"" + fmt(c.ml + 8) + "\" y=\"" + fmt(c.mt + 14) +
              "\" font-family=\"sans-serif\" font-size=\"11\">r_observed = " +
              fmt(spec.pearson_observed) + "</text>\n";
    if (!spec.generated.empty()) {
        c.body += "<text x=\"" + fmt(c.ml + 8) + "\" y=\"" + fmt(c.mt + 28) +
                  "\" font-family=\"sans-serif\" font-size=\"11\">r_generated = " +
                  fmt(spec.pearson_generated) + "</text>\n";
    }
    c.legend(!spec.generated.empty());
    return c.close();
}

}  // namespace rockgen
