#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "check.hpp"
#include "potcap/error.hpp"
#include "potcap/io.hpp"
#include "potcap/reports.hpp"
#include "potcap/runner.hpp"
#include "potcap/seeding.hpp"
#include "potcap/zoo.hpp"

using namespace potcap;

TEST_CASE("matrix and channel JSON round trips") {
  const Matrix m = random_gaussian(2, 3, 1);
  CHECK((matrix_from_json(matrix_to_json(m)) - m).norm() == 0.0);
  const auto ch = random_channel(2, 3, 2, 2);
  const auto back = channel_from_json(channel_to_json(ch));
  CHECK(back.name() == ch.name());
  REQUIRE(back.num_kraus() == ch.num_kraus());
  for (int i = 0; i < ch.num_kraus(); ++i) CHECK((back.kraus(i) - ch.kraus(i)).norm() == 0.0);

  Json bad = channel_to_json(ch);
  bad["kraus"] = Json::array({matrix_to_json(0.5 * ch.kraus(0))});
  CHECK_THROWS_AS(channel_from_json(bad), InvariantViolation);
  CHECK_THROWS_AS(channel_from_json(Json::object()), ConfigError);
}

TEST_CASE("channel specs parse and print") {
  const auto s = ChannelSpec::parse("depolarizing(0.5, 3)");
  CHECK(s.kind == "depolarizing");
  CHECK(s.params == std::vector<double>{0.5, 3});
  CHECK(ChannelSpec::parse(s.to_string()).params == s.params);
  CHECK(ChannelSpec::parse("measure_prepare(x)").text_arg == "x");
  CHECK_THROWS_AS(zoo("warp_drive(1)"), ConfigError);
  CHECK_THROWS_AS(zoo("dephasing(1.5)"), ConfigError);
  CHECK_THROWS_AS(zoo("dephasing(0.1, 2, 3)"), ConfigError);
  for (const auto& k : zoo_kinds()) CHECK_FALSE(k.empty());
}

TEST_CASE("custom channel files") {
  const std::string path = "potcap_test_channel.json";
  {
    std::ofstream out(path);
    out << channel_to_json(amplitude_damping_channel(0.4)).dump();
  }
  const auto ch = zoo("custom(" + path + ")");
  CHECK(ch.d_out() == 2);
  CHECK((ch.kraus(1) - amplitude_damping_channel(0.4).kraus(1)).norm() == 0.0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(zoo("custom(" + path + ")"), ConfigError);
}

TEST_CASE("derived seeds are deterministic and separate streams") {
  CHECK(derive_seed(1, "chi", 0) == derive_seed(1, "chi", 0));
  CHECK(derive_seed(1, "chi", 0) != derive_seed(1, "chi", 1));
  CHECK(derive_seed(1, "chi", 0) != derive_seed(1, "q1", 0));
  CHECK(derive_seed(1, "chi", 0) != derive_seed(2, "chi", 0));
}

TEST_CASE("run configs round trip and reject bad fields") {
  RunConfig c;
  c.command = "capacity";
  c.channels = {"dephasing(0.1)"};
  c.quantities = {"q1"};
  c.seed = 42;
  c.restarts = 3;
  c.tol = 1e-7;
  const auto back = run_config_from_json(to_json(c));
  CHECK(back.command == c.command);
  CHECK(back.channels == c.channels);
  CHECK(back.seed == 42);
  CHECK(back.restarts == 3);
  CHECK(back.tol == 1e-7);

  CHECK_THROWS_AS(run_config_from_json(Json{{"command", "capacity"}, {"bogus", 1}}), ConfigError);
  const std::string text = "{\n  \"command\": \"capacity\",\n  \"seed\": -4\n}\n";
  try {
    run_config_from_json(Json::parse(text), text);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("seed") != std::string::npos);
  }
}

TEST_CASE("normalization fills command defaults") {
  RunConfig c;
  c.command = "capacity";
  c.channels = {"identity(2)"};
  CHECK(normalized(c).quantities == std::vector<std::string>{"chi", "q1", "p1", "c_e", "q_a"});
  c.command = "additivity";
  c.channels.push_back("dephasing(0.1)");
  const auto a = normalized(c);
  CHECK(a.quantities == std::vector<std::string>{"q1", "p1"});
  CHECK(a.experiments == std::vector<std::string>{"gap"});
  c.command = "teleport";
  CHECK_THROWS_AS(normalized(c), ConfigError);
}

TEST_CASE("runs are reproducible from the config") {
  RunConfig c;
  c.command = "capacity";
  c.channels = {"amplitude_damping(0.3)"};
  c.quantities = {"chi", "q1"};
  c.seed = 5;
  c.restarts = 2;
  const auto a = run(c), b = run(c);
  CHECK(a.report.contains("timestamp"));
  CHECK(a.report["schema_version"] == kSchemaVersion);
  CHECK(report_payload(a.report) == report_payload(b.report));
  c.seed = 6;
  CHECK(report_payload(run(c).report)["config"] != report_payload(a.report)["config"]);
}

TEST_CASE("state specifications") {
  const auto bell = state_from_spec("bell");
  CHECK(bell.d_b == 2);
  CHECK(bell.d_e == 2);
  CHECK_NEAR(bell.rho.trace().real(), 1.0, 1e-14);
  const auto r = state_from_spec("random(2,3,2,7)");
  CHECK(r.d_e == 3);
  CHECK(numerical_rank(r.rho) == 2);
  CHECK(state_from_spec("block(4,2,3)").d_b == 4);
  CHECK_NEAR(state_from_spec("isotropic(0.5)").rho(0, 0).real(), 0.5 * 0.5 + 0.5 / 4, 1e-14);
  CHECK_THROWS_AS(state_from_spec("isotropic(2)"), ConfigError);
  CHECK_THROWS_AS(state_from_spec("rainbow"), ConfigError);
}

TEST_CASE("reports serialize non-finite numbers as null") {
  CapacityReport r;
  r.quantity = "chi";
  const Json j = to_json(r);
  CHECK(j["upper_estimate"].is_null());
  CHECK(j["bound_direction"] == "certified_lower");
}
