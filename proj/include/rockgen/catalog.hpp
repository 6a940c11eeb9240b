// Dataset catalog manifest: a JSON array of dataset descriptors.

#ifndef ROCKGEN_CATALOG_HPP
#define ROCKGEN_CATALOG_HPP

#include <string>

#include "rockgen/csv.hpp"
#include "rockgen/types.hpp"

namespace rockgen {

// Loads a manifest and cross-validates every referenced file: the file must
// exist and its data-row count must match the manifest's `count` field.
DatasetCatalog load_catalog(const std::string& path);

// Loads and validates the dataset behind one catalog entry.
DiscontinuitySet load_catalog_entry(const CatalogEntry& entry,
                                    const ColumnMap& columns = {});

}  // namespace rockgen

#endif
