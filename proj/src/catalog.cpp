#include "immersion/catalog.hpp"

#include <array>

namespace immersion {

namespace {

// a = b = 1/√2 in the diagonal entries, so the diagonal geodesic has λ = 0 and U = T.
constexpr std::array kEntries{
    CatalogEntry{"totally_geodesic", "S^1 x H^1 inside S^1 x H^2 (n=2, k=1): S = 0, U = 0, lambda = -1",
                 R"json({
  "kind": "hypersurface", "n": 2, "k": 1,
  "coords": ["u1", "u2"],
  "domain": [[-1, 1], [-1, 1]],
  "base_point": [0, 0],
  "fields": {"x": ["cos(u1)", "sin(u1)", "0", "sinh(u2)", "cosh(u2)"]}
})json"},
    CatalogEntry{"sphere_slice", "S^1 x H^1 inside S^2 x H^1 (n=2, k=2): S = 0, U = 0, lambda = +1",
                 R"json({
  "kind": "hypersurface", "n": 2, "k": 2,
  "coords": ["u1", "u2"],
  "domain": [[-1, 1], [-1, 1]],
  "base_point": [0, 0],
  "fields": {"x": ["cos(u1)", "sin(u1)", "0", "sinh(u2)", "cosh(u2)"]}
})json"},
    CatalogEntry{"diagonal_geodesic", "t -> (cos at, sin at, sinh bt, cosh bt) in S^1 x H^1, a = b = 1/sqrt(2)",
                 R"json({
  "kind": "hypersurface", "n": 1, "k": 1,
  "coords": ["t"],
  "domain": [[-1, 1]],
  "base_point": [0],
  "fields": {"x": ["cos(sqrt(0.5)*t)", "sin(sqrt(0.5)*t)", "sinh(sqrt(0.5)*t)", "cosh(sqrt(0.5)*t)"]}
})json"},
    CatalogEntry{"diagonal_cylinder",
                 "diagonal geodesic swept along meridians of S^2, in S^2 x H^1 (n=2, k=2, U != 0)",
                 R"json({
  "kind": "hypersurface", "n": 2, "k": 2,
  "coords": ["u1", "u2"],
  "domain": [[-1, 1], [-0.8, 0.8]],
  "base_point": [0, 0.1],
  "fields": {"x": ["cos(u2)*cos(sqrt(0.5)*u1)", "cos(u2)*sin(sqrt(0.5)*u1)", "sin(u2)",
                   "sinh(sqrt(0.5)*u1)", "cosh(sqrt(0.5)*u1)"]}
})json"},
    CatalogEntry{"perturbed_geodesic", "non-geodesic curve in S^1 x H^1 with angle a t + 0.3 t^2 (S != 0)",
                 R"json({
  "kind": "hypersurface", "n": 1, "k": 1,
  "coords": ["t"],
  "domain": [[-1, 1]],
  "base_point": [0],
  "fields": {"x": ["cos(sqrt(0.5)*t + 0.3*t^2)", "sin(sqrt(0.5)*t + 0.3*t^2)",
                   "sinh(sqrt(0.5)*t)", "cosh(sqrt(0.5)*t)"]}
})json"},
    CatalogEntry{"tilted_slice", "surface in S^1 x H^2 mixing the circle with a boost (n=2, k=1, S != 0, U != 0)",
                 R"json({
  "kind": "hypersurface", "n": 2, "k": 1,
  "coords": ["u1", "u2"],
  "domain": [[-1, 1], [-0.8, 0.8]],
  "base_point": [0.1, 0],
  "fields": {"x": ["cos(sqrt(0.5)*u1)", "sin(sqrt(0.5)*u1)", "sinh(u2)",
                   "cosh(u2)*sinh(sqrt(0.5)*u1)", "cosh(u2)*cosh(sqrt(0.5)*u1)"]}
})json"},
    CatalogEntry{"diagonal_slab", "three-dimensional analogue of the diagonal cylinder in S^2 x H^2 (n=3, k=2)",
                 R"json({
  "kind": "hypersurface", "n": 3, "k": 2,
  "coords": ["u1", "u2", "u3"],
  "domain": [[-0.8, 0.8], [-0.7, 0.7], [-0.7, 0.7]],
  "base_point": [0, 0.1, 0],
  "fields": {"x": ["cos(u2)*cos(sqrt(0.5)*u1)", "cos(u2)*sin(sqrt(0.5)*u1)", "sin(u2)", "sinh(u3)",
                   "cosh(u3)*sinh(sqrt(0.5)*u1)", "cosh(u3)*cosh(sqrt(0.5)*u1)"]}
})json"},
    CatalogEntry{"product_structure", "the totally geodesic quintuple written out directly (structure kind)",
                 R"json({
  "kind": "structure", "n": 2, "k": 1,
  "coords": ["u1", "u2"],
  "domain": [[-1, 1], [-1, 1]],
  "base_point": [0, 0],
  "fields": {
    "g": [["1", "0"], ["0", "1"]],
    "S": [["0", "0"], ["0", "0"]],
    "f": [["1", "0"], ["0", "-1"]],
    "U": ["0", "0"],
    "lambda": "-1"
  }
})json"},
};

}  // namespace

std::span<const CatalogEntry> catalog() { return kEntries; }

const CatalogEntry* find_catalog_entry(std::string_view name) {
  for (const auto& e : kEntries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

}  // namespace immersion
