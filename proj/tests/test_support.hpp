#pragma once

#include <vector>

#include "oracles.hpp"
#include "torickems/fixtures.hpp"

inline std::vector<oracle::I2> oracle_rays(const std::string& name) {
  std::vector<oracle::I2> out;
  for (const auto& r : torickems::find_fixture(name).rays) out.push_back({r[0], r[1]});
  return out;
}

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"cp2", "p1xp1", "dp1", "dp2", "dp3"};
  return names;
}
