#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "immersion/catalog.hpp"
#include "immersion/cli.hpp"
#include "support/fixtures.hpp"

using namespace immersion;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<json> records(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "immersion-forge-tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("check") {
  const Run ok = run({"check", "catalog:totally_geodesic"});
  CHECK(ok.code == kExitOk);
  const json summary = records(ok.out).back();
  CHECK(summary["admissible"] == true);
  CHECK(summary["k"] == 1);

  const Run excluded = run({"check", fixtures::data_path("f_identity.json")});
  CHECK(excluded.code == kExitRejected);
  CHECK(excluded.err.find("excluded case f = ±Id") != std::string::npos);

  const Run malformed = run({"check", fixtures::data_path("malformed.json")});
  CHECK(malformed.code == kExitInputError);
  CHECK(malformed.err.find("byte offset 4") != std::string::npos);

  CHECK(run({"check", fixtures::data_path("missing.json")}).code == kExitInputError);
  CHECK(run({"check", "catalog:no_such_entry"}).code == kExitInputError);
  CHECK(run({"check", "catalog:totally_geodesic", "--grid", "1"}).code == kExitInputError);
  CHECK(run({"check", "catalog:totally_geodesic", "--format", "xml"}).code == kExitInputError);
}

TEST_CASE("reconstruct") {
  const Run ok = run({"reconstruct", "catalog:diagonal_geodesic"});
  CHECK(ok.code == kExitOk);
  const auto recs = records(ok.out);
  REQUIRE(recs.size() == 9);
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    CHECK(recs[i]["record"] == "point");
    CHECK(recs[i]["residuals"]["quadric"].get<double>() < 1e-7);
  }
  CHECK(recs.back()["passed"] == true);

  const Run wrong = run({"reconstruct", fixtures::data_path("wrong_k.json")});
  CHECK(wrong.code == kExitRejected);
  CHECK(wrong.err.find("k mismatch") != std::string::npos);
}

TEST_CASE("grid density does not change shared samples") {
  auto psi_by_point = [](const std::string& out) {
    std::map<std::vector<double>, std::vector<double>> m;
    for (const json& r : records(out)) {
      if (r["record"] == "point") m[r["point"].get<std::vector<double>>()] = r["psi"].get<std::vector<double>>();
    }
    return m;
  };
  const auto coarse = psi_by_point(run({"reconstruct", "catalog:tilted_slice", "--grid", "2"}).out);
  const auto fine = psi_by_point(run({"reconstruct", "catalog:tilted_slice", "--grid", "8"}).out);
  REQUIRE(coarse.size() == 4);
  std::size_t shared = 0;
  for (const auto& [point, psi] : coarse) {
    for (const auto& [other, psi_fine] : fine) {
      if (std::abs(point[0] - other[0]) > 1e-12 || std::abs(point[1] - other[1]) > 1e-12) continue;
      ++shared;
      for (std::size_t c = 0; c < psi.size(); ++c) CHECK(std::abs(psi[c] - psi_fine[c]) < 1e-9);
    }
  }
  CHECK(shared == 4);
}

TEST_CASE("extract") {
  const Run ok = run({"extract", "catalog:diagonal_geodesic", "--grid", "3"});
  CHECK(ok.code == kExitOk);
  const auto recs = records(ok.out);
  CHECK(std::abs(recs[1]["lambda"].get<double>()) < 1e-12);
  CHECK(recs[1]["U"][0].get<double>() == doctest::Approx(1.0));

  const Run off = run({"extract", fixtures::data_path("off_model.json")});
  CHECK(off.code == kExitInputError);
  CHECK(off.err.find("not on model") != std::string::npos);

  CHECK(run({"extract", "catalog:product_structure"}).code == kExitInputError);
}

TEST_CASE("roundtrip on every catalog hypersurface") {
  for (const char* name : fixtures::kHypersurfaces) {
    const Run r = run({"roundtrip", std::string("catalog:") + name});
    INFO(name << ": " << r.err);
    CHECK(r.code == kExitOk);
    const json summary = records(r.out).back();
    CHECK(summary["sup_distance"].get<double>() < 1e-6);
  }
}

TEST_CASE("audit") {
  const Run r = run({"audit", "catalog:totally_geodesic"});
  CHECK(r.code == kExitOk);
  const json summary = records(r.out).back();
  CHECK(summary["statements"][0] == "Gauss variant (i) passes; (ii) fails");
}

TEST_CASE("catalog listing") {
  const Run list = run({"catalog"});
  CHECK(list.code == kExitOk);
  CHECK(records(list.out).size() == catalog().size());
  const Run one = run({"catalog", "tilted_slice"});
  CHECK(one.code == kExitOk);
  CHECK(json::parse(one.out)["kind"] == "hypersurface");
}

TEST_CASE("output files and formats") {
  const auto dir = scratch_dir();
  const std::string path = (dir / "report.jsonl").string();
  std::filesystem::remove(path);

  CHECK(run({"check", "catalog:totally_geodesic", "--out", path}).code == kExitOk);
  std::ifstream first(path);
  const std::string a((std::istreambuf_iterator<char>(first)), {});
  CHECK_FALSE(a.empty());

  // Re-running replaces the whole document and leaves no temporary behind.
  CHECK(run({"check", "catalog:diagonal_geodesic", "--out", path}).code == kExitOk);
  std::ifstream second(path);
  const std::string b((std::istreambuf_iterator<char>(second)), {});
  CHECK(records(b).back()["grid_points"] == 8);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    CHECK(entry.path().extension() != ".tmp");
  }

  const Run csv = run({"reconstruct", "catalog:diagonal_geodesic", "--grid", "2", "--format", "csv"});
  CHECK(csv.code == kExitOk);
  CHECK(csv.out.rfind("t,psi1,psi2,psi3,psi4,N1,N2,N3,N4,quadric", 0) == 0);
  CHECK(csv.out.find("\n# summary {") != std::string::npos);

  // Base point override and step flag.
  const Run moved = run({"reconstruct", "catalog:tilted_slice", "--grid", "3", "--base", "-0.3,0.2", "--step", "0.002"});
  CHECK(moved.code == kExitOk);
  CHECK(records(moved.out).back()["base_point"][0].get<double>() == doctest::Approx(-0.3));
}

TEST_CASE("runs are deterministic") {
  const Run a = run({"roundtrip", "catalog:diagonal_cylinder", "--grid", "4"});
  const Run b = run({"roundtrip", "catalog:diagonal_cylinder", "--grid", "4"});
  CHECK(a.out == b.out);
}
