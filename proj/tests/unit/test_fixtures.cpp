#include <doctest.h>

#include "opalg/fixtures.hpp"
#include "opalg/io.hpp"

using namespace opalg;

TEST_CASE("the catalog lists thirteen fixtures in order") {
  const auto names = list_fixtures();
  CHECK(names.size() == 13);
  CHECK(names.front() == "F1");
  CHECK(names[1] == "F1b");
  CHECK(names.back() == "F11");
  CHECK(std::find(names.begin(), names.end(), "F9") != names.end());
  for (const auto& n : names) {
    CAPTURE(n);
    const FixtureBundle f = load_fixture(n);
    CHECK(f.name == n);
    CHECK(!f.rows.empty());
    CHECK(!fixture_source(n).empty());
  }
  CHECK_THROWS_AS(load_fixture("F99"), UnknownFixtureError);
}

TEST_CASE("every fixture verifies, including its negative control") {
  for (const auto& n : list_fixtures()) {
    CAPTURE(n);
    const FixtureReport r = verify_fixture(n);
    for (const auto& row : r.rows) {
      CAPTURE(row.row.check);
      CAPTURE(row.error);
      CHECK(row.matches);
    }
    CHECK(r.control.flipped);
    CHECK(r.pass());
  }
}

TEST_CASE("the single-parameter Lie family has a grid wider than its degree") {
  const FixtureBundle f = load_fixture("F1b");
  REQUIRE(f.parameters.size() == 1);
  CHECK(f.parameters[0].name == "b");
  CHECK(f.parameters[0].values.size() == 8);
  CHECK(f.parameters[0].values.size() > f.parameters[0].degree);
  CHECK(verify_fixture(f).grid_points == 8);
}

TEST_CASE("the weighted family guards its denominator") {
  const FixtureBundle f = load_fixture("F11");
  REQUIRE(f.guards.size() == 1);
  for (const auto& p : f.parameters) CHECK(p.values.size() > p.degree);
  Bindings bad = f.sample;
  bad["y"] = 0;
  CHECK_THROWS(instantiate(f, bad));
  CHECK(verify_fixture(f).grid_points == 5 * 5 * 3 * 3);
}

TEST_CASE("a corrupted expectation is reported as a mismatch, not thrown") {
  nlohmann::json j = nlohmann::json::parse(fixture_source("F9"));
  j["rows"][2]["expect"] = "fail";
  const FixtureReport r = verify_fixture(parse_fixture(j));
  CHECK(!r.pass());
  CHECK(!r.rows[2].matches);
  CHECK(r.rows[2].actual == "pass");
  CHECK(r.rows[0].matches);
}

TEST_CASE("unknown checks surface as errors in the report") {
  nlohmann::json j = nlohmann::json::parse(fixture_source("F9"));
  j["rows"][0]["check"] = "identity:alternativity";
  const FixtureReport r = verify_fixture(parse_fixture(j));
  CHECK(r.rows[0].actual == "error");
  CHECK(!r.rows[0].error.empty());
  CHECK(!r.pass());
}

TEST_CASE("left averaging and derived flexibility on the block-diagonal matrices") {
  const FixtureBundle f = load_fixture("F8");
  const FixtureInstance inst = instantiate(f, f.sample);
  REQUIRE(inst.op);
  for (const auto& row : f.rows) {
    CAPTURE(row.check);
    CHECK(evaluate_row(inst, row, f.sample).pass == (row.expect == "pass"));
  }
}

TEST_CASE("negative controls flip the target verdict") {
  for (const auto& n : list_fixtures()) {
    CAPTURE(n);
    const ControlResult c = run_negative_control(load_fixture(n));
    CHECK(c.base == "pass");
    CHECK(c.perturbed != c.base);
    CHECK(c.flipped);
  }
}

TEST_CASE("perturbing u breaks the right identity of the general family") {
  const FixtureBundle f = load_fixture("F1");
  const FixtureInstance inst = instantiate(f, f.sample, {Perturbation::Kind::shift_u, 0});
  const FixtureRow row{"element:right_identity", "A", {}, "pass"};
  CHECK(!evaluate_row(inst, row, f.sample).pass);
  CHECK(evaluate_row(instantiate(f, f.sample), row, f.sample).pass);
}
