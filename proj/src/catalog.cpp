#include "rockgen/catalog.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"
#include "rockgen/errors.hpp"

namespace rockgen {

namespace fs = std::filesystem;

DatasetCatalog load_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ManifestParseError("cannot open manifest " + path);

    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ManifestParseError(path + ": " + e.what());
    }
    if (!doc.is_array()) throw ManifestParseError(path + ": manifest must be a JSON array");

    const fs::path base = fs::path(path).parent_path();
    static const std::set<std::string> kScenarios = {"I", "II", "III", "IV"};

    DatasetCatalog catalog;
    std::set<std::string> names;
    for (const auto& item : doc) {
        CatalogEntry entry;
        try {
            entry.name = item.at("name").get<std::string>();
            entry.location = item.at("location").get<std::string>();
            entry.group_id = item.at("group").get<int>();
            entry.path = (base / item.at("path").get<std::string>()).string();
            entry.expected_count = item.at("count").get<std::size_t>();
            entry.scenario = item.at("scenario").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw ManifestParseError(path + ": " + e.what());
        }
        if (entry.expected_count == 0) {
            throw ManifestParseError(entry.name + ": count must be positive");
        }
        if (!kScenarios.count(entry.scenario)) {
            throw ManifestParseError(entry.name + ": scenario '" + entry.scenario +
                                     "' not one of I, II, III, IV");
        }
        if (!names.insert(entry.name).second) {
            throw ManifestParseError("duplicate dataset name '" + entry.name + "'");
        }
        if (!fs::exists(entry.path)) {
            throw DatasetFileMissing(entry.name + ": " + entry.path);
        }
        const std::size_t actual = count_csv_rows(entry.path);
        if (actual != entry.expected_count) {
            throw CountMismatch(entry.name + ": manifest expects " +
                                std::to_string(entry.expected_count) + " rows, file has " +
                                std::to_string(actual));
        }
        catalog.entries.push_back(std::move(entry));
    }
    return catalog;
}

DiscontinuitySet load_catalog_entry(const CatalogEntry& entry, const ColumnMap& columns) {
    DiscontinuitySet set = parse_csv(entry.path, columns);
    set.name = entry.name;
    set.location = entry.location;
    set.group_id = entry.group_id;
    set.source = Provenance{Provenance::Kind::Observed, "", 0};
    return set;
}

}  // namespace rockgen
