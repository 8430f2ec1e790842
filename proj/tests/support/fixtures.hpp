#pragma once

#include <string>
#include <string_view>

#include "immersion/ambient.hpp"
#include "immersion/io.hpp"
#include "immersion/structure.hpp"

namespace fixtures {

using namespace immersion;

inline std::string data_path(std::string_view file) { return std::string(TEST_DATA_DIR) + "/" + std::string(file); }

inline ParametrizedHypersurface catalog_hypersurface(const std::string& name) {
  return *load_document("catalog:" + name).hypersurface;
}

// Structure of a catalog entry; hypersurface entries go through extraction.
inline StructureSpec catalog_structure(const std::string& name, std::size_t density = kDefaultGridDensity) {
  InputDocument doc = load_document("catalog:" + name);
  if (doc.structure) return *doc.structure;
  return extract_structure(*doc.hypersurface, uniform_grid(doc.hypersurface->chart, density));
}

inline StructureSpec structure_from_json(std::string_view text) { return *parse_document(text).structure; }

// Flat 2-dimensional quintuple with the given field expressions.
inline StructureSpec flat_structure(const std::string& S, const std::string& f, const std::string& U,
                                    const std::string& lambda, int k = 1) {
  return structure_from_json(R"({"kind": "structure", "n": 2, "k": )" + std::to_string(k) +
                             R"(, "coords": ["u1", "u2"], "domain": [[-1, 1], [-1, 1]], "base_point": [0, 0],
      "fields": {"g": [["1", "0"], ["0", "1"]], "S": )" + S + R"(, "f": )" + f + R"(, "U": )" + U +
                             R"(, "lambda": ")" + lambda + R"("}})");
}

inline const char* const kHypersurfaces[] = {"totally_geodesic",   "sphere_slice", "diagonal_geodesic",
                                             "diagonal_cylinder",  "perturbed_geodesic", "tilted_slice",
                                             "diagonal_slab"};

}  // namespace fixtures
