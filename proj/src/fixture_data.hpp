#pragma once

// Fixture JSON documents compiled into the library (generated at configure
// time from data/fixtures).

#include <string>
#include <vector>

namespace opalg::fixture_data {

struct Source {
  std::string name;
  std::string json;
};

/// Catalog order.
const std::vector<Source>& sources();

}  // namespace opalg::fixture_data
