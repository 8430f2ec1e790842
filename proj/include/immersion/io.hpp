#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "immersion/ambient.hpp"
#include "immersion/fields.hpp"

namespace immersion {

// A parsed input document: either a structure quintuple or a hypersurface.
struct InputDocument {
  std::string kind;  // "structure" or "hypersurface"
  std::string source;
  std::optional<StructureSpec> structure;
  std::optional<ParametrizedHypersurface> hypersurface;

  const Chart& chart() const;
  Chart& chart();
};

/// Throws SchemaError for shape problems and ParseError (with byte offset
/// inside the offending expression) for bad expressions.
InputDocument parse_document(std::string_view text, const std::string& source = "input");

/// Reads a file, or a shipped example when `location` is "catalog:NAME".
InputDocument load_document(const std::string& location);

/// Writes `content` to a temporary sibling file and renames it over `path`.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace immersion
