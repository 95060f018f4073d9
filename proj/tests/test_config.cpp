#include <doctest.h>

#include <json.hpp>

#include "optomech/config.hpp"

using namespace optomech;

TEST_CASE("defaults resolve") {
  const RunConfig c;
  const nlohmann::json r = c.resolved();
  CHECK(r.at("hbar") == 1.0);
  CHECK(r.at("light_speed").get<double>() > 0.0);
  CHECK(r.at("q0") == doctest::Approx(1.01));
  CHECK(c.cavity().omega_opt == 10.0);
  CHECK(c.space().dim() == 64);
  CHECK(c.variants() == std::vector<HamiltonianVariant>{HamiltonianVariant::H012});
  for (const ConfigKey& k : config_keys()) CHECK(find_key(k.name) == &k);
  CHECK(find_key("nope") == nullptr);
}

TEST_CASE("SI units") {
  RunConfig c;
  c.set("unit_system", "SI");
  CHECK(c.cavity().hbar == kHbarSI);
  CHECK(c.cavity().light_speed == kLightSpeedSI);
}

TEST_CASE("json merge and validation") {
  RunConfig c;
  c.merge_json_text(R"({"mass": 2.5, "Q0": [0.1, 0.2], "variant": ["H3", "H4"], "n_opt": 5})");
  CHECK(c.number("mass") == 2.5);
  CHECK(c.numbers("Q0") == std::vector<double>{0.1, 0.2});
  CHECK(c.variants().size() == 2);
  CHECK(c.space().n_opt == 5);
  CHECK_THROWS_AS(c.merge_json_text(R"({"massive": 1})"), ConfigError);
  CHECK_THROWS_AS(c.merge_json_text(R"({"mass": "heavy"})"), ConfigError);
  CHECK_THROWS_AS(c.merge_json_text(R"({"n_opt": 2.5})"), ConfigError);
  CHECK_THROWS_AS(c.merge_json_text("[1, 2]"), ConfigError);
}

TEST_CASE("syntax errors report line and column") {
  RunConfig c;
  try {
    c.merge_json_text("{\n  \"mass\": ,\n}", "run.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("run.json:2:") == 0);
  }
  CHECK(line_column("ab\ncd", 5) == std::pair<int, int>{2, 2});
}

TEST_CASE("command line strings") {
  RunConfig c;
  c.set_from_string("Q0", "0.1,0.2,0.3");
  CHECK(c.numbers("Q0").size() == 3);
  c.set_from_string("theta_low_omega", "true");
  CHECK(c.boolean("theta_low_omega"));
  c.set_from_string("kmax", "6");
  CHECK(c.integer("kmax") == 6);
  c.set_from_string("sweep", "length=1,2,4");
  CHECK(c.raw().at("sweep").at("length").size() == 3);
  CHECK_THROWS_AS(c.set_from_string("kmax", "six"), ConfigError);
  CHECK_THROWS_AS(c.set_from_string("unknown", "1"), ConfigError);
}

TEST_CASE("hash identifies the run") {
  RunConfig a, b;
  CHECK(a.hash() == b.hash());
  b.set("out_dir", "/tmp/x");
  CHECK(a.hash() == b.hash());
  b.set("mass", 2.0);
  CHECK(a.hash() != b.hash());
  CHECK(a.hash().size() == 16);
}
