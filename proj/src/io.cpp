#include "immersion/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "immersion/catalog.hpp"
#include "immersion/error.hpp"

namespace immersion {

namespace {

using nlohmann::json;

const json& member(const json& doc, const char* key, const std::string& where) {
  if (!doc.is_object() || !doc.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
  return doc.at(key);
}

std::string expression_text(const json& value, const std::string& where) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number()) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value.get<double>());
    return buffer;
  }
  throw SchemaError(where + ": expression must be a string or a number");
}

Expression parse_at(const json& value, const std::vector<std::string>& coords, const std::string& where) {
  const std::string text = expression_text(value, where);
  try {
    return Expression::parse(text, coords);
  } catch (const ParseError& e) {
    std::string message = e.what();
    const auto cut = message.rfind(" at byte offset");
    if (cut != std::string::npos) message.resize(cut);
    throw ParseError(where + ": " + message + " in \"" + text + "\"", e.offset());
  }
}

std::vector<Expression> parse_vector(const json& value, std::size_t size, const std::vector<std::string>& coords,
                                     const std::string& where) {
  if (!value.is_array() || value.size() != size) {
    throw SchemaError(where + ": expected an array of " + std::to_string(size) + " expressions");
  }
  std::vector<Expression> out;
  for (std::size_t i = 0; i < size; ++i) out.push_back(parse_at(value[i], coords, where + "[" + std::to_string(i) + "]"));
  return out;
}

ExpressionMatrix parse_matrix(const json& value, std::size_t n, const std::vector<std::string>& coords,
                              const std::string& where) {
  if (!value.is_array() || value.size() != n) {
    throw SchemaError(where + ": expected " + std::to_string(n) + " rows");
  }
  ExpressionMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = parse_vector(value[r], n, coords, where + "[" + std::to_string(r) + "]");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = row[c];
  }
  return m;
}

double number_at(const json& value, const std::string& where) {
  if (!value.is_number()) throw SchemaError(where + ": expected a number");
  return value.get<double>();
}

Chart parse_chart(const json& doc, std::size_t n) {
  Chart chart;
  const json& coords = member(doc, "coords", "document");
  if (!coords.is_array() || coords.size() != n) {
    throw SchemaError("coords: expected " + std::to_string(n) + " coordinate names");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!coords[i].is_string()) throw SchemaError("coords[" + std::to_string(i) + "]: expected a name");
    const std::string name = coords[i].get<std::string>();
    const bool valid = !name.empty() && std::isalpha(static_cast<unsigned char>(name[0])) &&
                       std::all_of(name.begin(), name.end(), [](char ch) {
                         return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
                       });
    if (!valid) throw SchemaError("coords[" + std::to_string(i) + "]: '" + name + "' is not an identifier");
    chart.coords.push_back(name);
  }
  const json& domain = member(doc, "domain", "document");
  if (!domain.is_array() || domain.size() != n) {
    throw SchemaError("domain: expected " + std::to_string(n) + " intervals");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string where = "domain[" + std::to_string(i) + "]";
    if (!domain[i].is_array() || domain[i].size() != 2) throw SchemaError(where + ": expected [lo, hi]");
    chart.box.push_back({number_at(domain[i][0], where), number_at(domain[i][1], where)});
  }
  const json& base = member(doc, "base_point", "document");
  if (!base.is_array() || base.size() != n) {
    throw SchemaError("base_point: expected " + std::to_string(n) + " coordinates");
  }
  chart.base_point.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    chart.base_point(static_cast<Eigen::Index>(i)) = number_at(base[i], "base_point[" + std::to_string(i) + "]");
  }
  chart.validate();
  return chart;
}

}  // namespace

const Chart& InputDocument::chart() const { return structure ? structure->chart : hypersurface->chart; }
Chart& InputDocument::chart() { return structure ? structure->chart : hypersurface->chart; }

InputDocument parse_document(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": invalid JSON", e.byte == 0 ? 0 : e.byte - 1);
  }
  if (!doc.is_object()) throw SchemaError(source + ": top level must be an object");

  InputDocument out;
  out.source = source;
  const json& kind = member(doc, "kind", "document");
  if (!kind.is_string()) throw SchemaError("kind: expected \"structure\" or \"hypersurface\"");
  out.kind = kind.get<std::string>();
  const json& n_value = member(doc, "n", "document");
  if (!n_value.is_number_integer() || n_value.get<long long>() < 1) {
    throw SchemaError("n: expected a positive integer");
  }
  const auto n = static_cast<std::size_t>(n_value.get<long long>());
  std::optional<int> k;
  if (doc.contains("k") && !doc.at("k").is_null()) {
    if (!doc.at("k").is_number_integer()) throw SchemaError("k: expected an integer");
    k = doc.at("k").get<int>();
  }
  Chart chart = parse_chart(doc, n);
  const json& fields = member(doc, "fields", "document");
  const std::vector<std::string> coords = chart.coords;

  if (out.kind == "structure") {
    ExpressionMatrix g = parse_matrix(member(fields, "g", "fields"), n, coords, "fields.g");
    ExpressionMatrix s = parse_matrix(member(fields, "S", "fields"), n, coords, "fields.S");
    ExpressionMatrix f = parse_matrix(member(fields, "f", "fields"), n, coords, "fields.f");
    std::vector<Expression> u = parse_vector(member(fields, "U", "fields"), n, coords, "fields.U");
    Expression lambda = parse_at(member(fields, "lambda", "fields"), coords, "fields.lambda");
    StructureSpec spec;
    spec.name = source;
    spec.chart = std::move(chart);
    spec.fields = std::make_shared<ExpressionFields>(std::move(g), std::move(s), std::move(f), std::move(u),
                                                     std::move(lambda));
    spec.declared_k = k;
    out.structure = std::move(spec);
  } else if (out.kind == "hypersurface") {
    if (!k) throw SchemaError("k: required for a hypersurface");
    if (*k < 1 || static_cast<std::size_t>(*k) > n) throw SchemaError("k: must lie in [1, n]");
    ParametrizedHypersurface h;
    h.name = source;
    h.chart = std::move(chart);
    h.k = static_cast<std::size_t>(*k);
    h.x = parse_vector(member(fields, "x", "fields"), n + 3, coords, "fields.x");
    out.hypersurface = std::move(h);
  } else {
    throw SchemaError("kind: expected \"structure\" or \"hypersurface\", got \"" + out.kind + "\"");
  }
  return out;
}

InputDocument load_document(const std::string& location) {
  constexpr std::string_view prefix = "catalog:";
  if (location.rfind(prefix, 0) == 0) {
    const std::string name = location.substr(prefix.size());
    const CatalogEntry* entry = find_catalog_entry(name);
    if (!entry) throw SchemaError("unknown catalog entry '" + name + "'");
    return parse_document(entry->document, name);
  }
  std::ifstream in(location, std::ios::binary);
  if (!in) throw SchemaError("cannot open input file '" + location + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str(), std::filesystem::path(location).stem().string());
}

void write_atomically(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace immersion
