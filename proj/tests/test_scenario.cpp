#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "scenario/json_io.hpp"
#include "scenario/presets.hpp"
#include "scenario/runner.hpp"

using namespace botsim;

namespace {

const char* kMinimalScenario = R"({
  "name": "minimal",
  "seed": 5,
  "horizon_s": 30,
  "services": [{"name": "telnet23", "port": 23, "kind": "credential"}],
  "topology": {
    "core_routers": 2,
    "regions": [{"name": "home", "devices": 1, "cpes": 1, "dslams": 1,
                 "brases": 1}],
    "services": [{"name": "site", "kind": "target", "ingress_gbps": 1}]
  },
  "devices": {
    "home": {
      "services": ["telnet23"],
      "credentials": [{"user": "admin", "pass": "admin", "weight": 1.0}]
    }
  },
  "malware": [],
  "legit_flows": [{"target": "site", "mbps": 10}]
})";

}  // namespace

TEST_CASE("a minimal scenario parses, runs, and stays fully available") {
  ParseResult parsed = parse_scenario(kMinimalScenario);
  REQUIRE(parsed.ok());
  CHECK(parsed.spec->total_devices() == 1);
  RunResult result = run_scenario(*parsed.spec);
  CHECK(result.summary.availability_defined);
  CHECK(result.summary.mean_availability == doctest::Approx(1.0));
  CHECK(result.summary.peak_attack_ingress_bps == doctest::Approx(0.0));
}

TEST_CASE("an attack referencing undefined malware names the reference") {
  std::string text = kMinimalScenario;
  text.insert(text.rfind('}'), R"(,
  "attacks": [{"id": "x", "malware": "ghost", "target": "site",
               "vector": "udp", "duration_s": 10,
               "per_bot_mbps": {"dist": "fixed", "value": 1}}]
)");
  ParseResult parsed = parse_scenario(text);
  REQUIRE_FALSE(parsed.ok());
  bool found = false;
  for (const auto& err : parsed.errors) {
    if (err.message.find("ghost") != std::string::npos &&
        err.path.find("attacks[0]") != std::string::npos) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("all validation problems are collected, not fail-fast") {
  const char* broken = R"({
  "name": "broken",
  "horizon_s": -5,
  "mystery_key": 1,
  "services": [{"name": "telnet23", "port": 23, "kind": "credential"}],
  "topology": {
    "core_routers": 1,
    "regions": [{"name": "home", "devices": 4, "cpes": 50001, "dslams": 1,
                 "brases": 1}]
  },
  "devices": {
    "home": {"services": ["no-such-service"],
             "credentials": [{"user": "a", "pass": "b"}]}
  },
  "defenses": [{"at_s": 1, "action": "patch", "vuln": "no-such-vuln"}]
})";
  ParseResult parsed = parse_scenario(broken);
  REQUIRE_FALSE(parsed.ok());
  CHECK(parsed.errors.size() >= 4);
  std::set<std::string> paths;
  for (const auto& err : parsed.errors) paths.insert(err.path);
  CHECK(paths.contains("mystery_key"));
  CHECK(paths.contains("horizon_s"));
  CHECK(paths.contains("devices.home.services"));
  CHECK(paths.contains("defenses[0].vuln"));
  bool bras_cap = false;
  for (const auto& err : parsed.errors) {
    if (err.message.find("session cap") != std::string::npos) bras_cap = true;
  }
  CHECK(bras_cap);
}

TEST_CASE("semantic errors carry source line numbers") {
  ParseResult parsed = parse_scenario(R"({
  "name": "lines",
  "horizon_s": 10,
  "mystery_key": true
})");
  REQUIRE_FALSE(parsed.ok());
  bool found = false;
  for (const auto& err : parsed.errors) {
    if (err.path == "mystery_key") {
      CHECK(err.line == 4);
      found = true;
    }
  }
  CHECK(found);
  CHECK(parsed.errors[0].render().find("line") != std::string::npos);
}

TEST_CASE("json syntax errors report their line") {
  ParseResult parsed = parse_scenario("{\n  \"name\": \"x\",\n  oops\n}");
  REQUIRE_FALSE(parsed.ok());
  CHECK(parsed.errors[0].line == 3);
}

TEST_CASE("serialize then parse yields an equivalent spec") {
  for (const std::string& name : preset_names()) {
    ScenarioSpec original = preset(name);
    std::string text = serialize_scenario(original);
    ParseResult reparsed = parse_scenario(text);
    REQUIRE_MESSAGE(reparsed.ok(), name << ": " <<
                    (reparsed.errors.empty()
                         ? "?" : reparsed.errors[0].render()));
    CHECK_MESSAGE(equivalent(original, *reparsed.spec), name);
  }
}

TEST_CASE("preset names form a closed, stable set") {
  auto names = preset_names();
  CHECK(names.size() == 7);
  for (const std::string& name : names) {
    CHECK(is_preset(name));
    CHECK_NOTHROW(preset(name));
  }
  CHECK_FALSE(is_preset("liberia"));
  CHECK_THROWS_WITH_AS(preset("nope"), doctest::Contains("krebs623"),
                       std::invalid_argument);
}

TEST_CASE("preset constants match the documented incidents") {
  ScenarioSpec krebs = preset("krebs623");
  std::size_t krebs_bots = 0;
  for (const auto& m : krebs.malware) krebs_bots += m.initial_infected;
  CHECK(krebs_bots == 24000);
  for (const auto& attack : krebs.attacks) {
    CHECK(attack.command.per_bot.a == doctest::Approx(25.96e6));
  }
  std::set<VectorTag> krebs_vectors;
  for (const auto& attack : krebs.attacks) {
    krebs_vectors.insert(attack.command.vector);
  }
  CHECK(krebs_vectors ==
        std::set<VectorTag>{VectorTag::GreIp, VectorTag::Syn, VectorTag::Http});

  ScenarioSpec ovh = preset("ovh1100");
  CHECK(ovh.topology.regions[0].devices == 145607);
  for (const auto& attack : ovh.attacks) {
    CHECK(attack.command.per_bot.a >= 1e6);    // inside the 1-30 Mbps band
    CHECK(attack.command.per_bot.upper() <= 30e6);
  }

  ScenarioSpec dyn = preset("dyn-watertorture");
  std::set<std::pair<double, double>> waves;
  for (const auto& attack : dyn.attacks) {
    waves.insert({attack.command.start_s,
                  attack.command.start_s + attack.command.duration_s});
  }
  // 11:10-13:20 and 15:50-17:00 UTC as seconds since midnight.
  CHECK(waves == std::set<std::pair<double, double>>{{40200.0, 48000.0},
                                                     {57000.0, 61200.0}});
  CHECK(dyn.dns.retry.count >= 9);
  CHECK(dyn.dns.retry.count <= 19);

  ScenarioSpec dt = preset("dt-tr064");
  CHECK(dt.topology.regions[0].devices == 900000);
  CHECK(dt.malware[0].spec.crash_probability > 0.0);
  CHECK(dt.malware[0].spec.entry_services ==
        std::vector<std::string>{"tr064"});

  ScenarioSpec growth = preset("mirai-growth");
  CHECK(growth.malware[0].initial_infected == 213000);
  CHECK(growth.horizon_s == doctest::Approx(14 * 86400.0));

  ScenarioSpec cctv = preset("cctv-http");
  CHECK(cctv.malware[0].initial_infected == 25000);
  CHECK(cctv.annotations.at("request_equivalent_rps") == "50000");
}

TEST_CASE("gre vectors cannot be used for reflection") {
  std::string text = kMinimalScenario;
  text.insert(text.rfind('}'), R"(,
  "malware": [{"name": "worm", "entry_services": ["telnet23"],
               "vectors": ["reflection"],
               "dictionary": [["admin", "admin"]]}],
  "attacks": [{"id": "r", "malware": "worm", "target": "site",
               "vector": "reflection", "duration_s": 10, "amp_factor": 0.5,
               "reflectors": [],
               "per_bot_mbps": {"dist": "fixed", "value": 1}}]
)");
  // Malware arrays collide with the minimal scenario's empty list, so drop it.
  auto at = text.find("\"malware\": [],");
  text.erase(at, std::string("\"malware\": [],").size());
  ParseResult parsed = parse_scenario(text);
  REQUIRE_FALSE(parsed.ok());
  bool amp = false, refl = false;
  for (const auto& err : parsed.errors) {
    if (err.path.find("amp_factor") != std::string::npos) amp = true;
    if (err.path.find("reflectors") != std::string::npos) refl = true;
  }
  CHECK(amp);
  CHECK(refl);
}
