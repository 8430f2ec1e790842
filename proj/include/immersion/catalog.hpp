#pragma once

#include <span>
#include <string>
#include <string_view>

namespace immersion {

// Shipped example documents, in the input-file JSON format.
struct CatalogEntry {
  std::string_view name;
  std::string_view description;
  std::string_view document;
};

std::span<const CatalogEntry> catalog();

/// nullptr when no entry has this name.
const CatalogEntry* find_catalog_entry(std::string_view name);

}  // namespace immersion
