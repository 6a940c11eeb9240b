#include "support/fixtures.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "rockgen/csv.hpp"
#include "rockgen/prng.hpp"
#include "rockgen/stats.hpp"

namespace rockgen::testfix {
namespace {

// Rescale to exact sample mean 0, population sd 1.
void standardize_exact(std::vector<double>& xs) {
    const double mu = mean(xs);
    const double sd = population_std(xs, mu);
    for (double& x : xs) x = (x - mu) / sd;
}

// Remove the empirical projection of `v` onto `u` (u already standardized).
void orthogonalize(std::vector<double>& v, const std::vector<double>& u) {
    double dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * u[i];
    dot /= static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * u[i];
}

}  // namespace

DiscontinuitySet correlated_set(const std::string& name, std::size_t n, double r,
                                std::uint64_t seed, const MarginalSpec& spec) {
    if (n < 3) throw std::invalid_argument("correlated_set needs n >= 3");
    Prng rng(seed);
    std::vector<double> z1(n), z2(n), z3(n);
    for (double& x : z1) x = rng.normal();
    for (double& x : z2) x = rng.normal();
    for (double& x : z3) x = rng.normal();

    standardize_exact(z1);
    orthogonalize(z2, z1);
    standardize_exact(z2);

    DiscontinuitySet set;
    set.name = name;
    set.source = Provenance{Provenance::Kind::Observed, "", 0};
    set.records.reserve(n);
    const double r_ortho = std::sqrt(1.0 - r * r);
    for (std::size_t i = 0; i < n; ++i) {
        DiscontinuityRecord rec;
        rec.dip_direction = spec.dir_mean + spec.dir_sd * z1[i];
        rec.dip_angle = spec.ang_mean + spec.ang_sd * (r * z1[i] + r_ortho * z2[i]);
        rec.trace_length = std::exp(spec.log_trace_mean + spec.log_trace_sd * z3[i]);
        validate_record(rec, i);
        set.records.push_back(rec);
    }
    return set;
}

std::string write_demo_catalog(const std::string& dir, std::uint64_t seed) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    struct Entry {
        const char* name;
        const char* location;
        int group;
        std::size_t count;
        double r;
        const char* scenario;
    };
    // Counts, scenario tags and correlation signs follow the published
    // dataset summary; the exact r values for the small sets come from the
    // per-scenario discussion where stated.
    const Entry entries[] = {
        {"oernlia_g1", "Oernlia, Norway", 1, 766, -0.69, "I"},
        {"laerdal_g1", "Laerdal, Norway", 1, 562, -0.55, "I"},
        {"thundovd_g2", "Thundovd, Norway", 2, 325, -0.30, "I"},
        {"valle_g2", "Valle, Norway", 2, 253, -0.22, "II"},
        {"thundovd_g1", "Thundovd, Norway", 1, 157, 0.45, "III"},
        {"oernlia_g3", "Oernlia, Norway", 3, 68, 0.12, "III"},
        {"valle_g3", "Valle, Norway", 3, 40, -0.37, "IV"},
        {"chenjiazhuang_g1", "Chenjiazhuang, China", 1, 104, 0.35, "IV"},
        {"chenjiazhuang_g2", "Chenjiazhuang, China", 2, 115, 0.0, "IV"},
        {"chenjiazhuang_g3", "Chenjiazhuang, China", 3, 119, 0.0, "IV"},
    };

    nlohmann::json manifest = nlohmann::json::array();
    for (const auto& e : entries) {
        const DiscontinuitySet set =
            correlated_set(e.name, e.count, e.r, derive_seed(seed, e.name));
        const std::string csv_name = std::string(e.name) + ".csv";
        write_csv(set, (fs::path(dir) / csv_name).string());
        manifest.push_back({{"name", e.name},
                            {"location", e.location},
                            {"group", e.group},
                            {"path", csv_name},
                            {"count", e.count},
                            {"scenario", e.scenario}});
    }
    const std::string manifest_path = (fs::path(dir) / "catalog.json").string();
    std::ofstream out(manifest_path, std::ios::binary);
    out << manifest.dump(2) << "\n";
    return manifest_path;
}

}  // namespace rockgen::testfix
