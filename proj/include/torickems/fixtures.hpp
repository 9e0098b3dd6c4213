#pragma once

// The five smooth toric del Pezzo fans, plus JSON load/export.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "torickems/errors.hpp"
#include "torickems/exact.hpp"

namespace torickems {

struct Fixture {
  std::string name;
  std::vector<LatticeVector> rays;
  std::optional<std::vector<std::vector<std::string>>> admissible_candidates;
  /// Optional display names for faces, e.g. {"F(-1,-1)": "E"}.
  std::map<std::string, std::string> labels;
  std::string notes;
};

inline const std::vector<Fixture>& fixture_catalog() {
  static const std::vector<Fixture> catalog = {
      {"cp2", {{1, 0}, {0, 1}, {-1, -1}}, std::nullopt, {}, "standard toric geometry: the projective plane"},
      {"p1xp1",
       {{1, 0}, {0, 1}, {-1, 0}, {0, -1}},
       std::nullopt,
       {},
       "standard toric geometry: product of two projective lines"},
      {"dp1",
       {{1, 1}, {-1, 0}, {-1, -1}, {0, -1}},
       std::vector<std::vector<std::string>>{{"F(-1,-1)"}, {"F(1,1)"}},
       {{"F(-1,-1)", "E"}, {"F(1,1)", "(+1)-curve"}},
       "worked example: blow-up of the plane at one point; admissible candidates are the exceptional divisor E and the "
       "(+1)-curve, using the extended symmetry of this surface"},
      {"dp2",
       {{1, 0}, {0, -1}, {-1, 0}, {0, 1}, {1, 1}},
       std::nullopt,
       {},
       "worked example: blow-up of the plane at two points"},
      {"dp3",
       {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {-1, -1}},
       std::nullopt,
       {},
       "standard toric geometry: blow-up of the plane at three points (hexagon)"},
  };
  return catalog;
}

inline const Fixture& find_fixture(const std::string& name) {
  for (const auto& f : fixture_catalog())
    if (f.name == name) return f;
  throw Error(ErrorKind::InvalidInput, "unknown fixture '" + name + "'");
}

inline nlohmann::ordered_json fixture_to_json(const Fixture& f) {
  nlohmann::ordered_json j;
  j["name"] = f.name;
  j["rays"] = nlohmann::ordered_json::array();
  for (const auto& r : f.rays) j["rays"].push_back(r.coords());
  if (f.admissible_candidates) j["admissible_candidates"] = *f.admissible_candidates;
  if (!f.labels.empty()) {
    j["labels"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : f.labels) j["labels"][k] = v;
  }
  j["notes"] = f.notes;
  return j;
}

inline Fixture fixture_from_json(const nlohmann::json& j) {
  try {
    Fixture f;
    f.name = j.at("name").get<std::string>();
    for (const auto& r : j.at("rays")) f.rays.emplace_back(r.get<std::vector<std::int64_t>>());
    if (j.contains("admissible_candidates") && !j["admissible_candidates"].is_null())
      f.admissible_candidates = j["admissible_candidates"].get<std::vector<std::vector<std::string>>>();
    if (j.contains("labels")) f.labels = j["labels"].get<std::map<std::string, std::string>>();
    if (j.contains("notes")) f.notes = j["notes"].get<std::string>();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("fixture JSON: ") + e.what());
  }
}

inline Fixture load_fixture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open fixture file '" + path + "'");
  try {
    return fixture_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, "fixture file '" + path + "': " + e.what());
  }
}

}  // namespace torickems
