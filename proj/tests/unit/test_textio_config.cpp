#include <doctest.h>

#include <sstream>

#include "redox/config.h"
#include "redox/error.h"
#include "redox/sim.h"
#include "redox/textio.h"
#include "support.h"

using namespace redox;
using testsupport::unit_sized_layout;

TEST_CASE("layout text round trip") {
  const Layout layout = unit_sized_layout(18, 3, 2, 1);
  const std::string text = layout_to_string(layout);
  CHECK(text.rfind("redox-layout v1 18 3 2 1 1 0", 0) == 0);

  std::istringstream in(text);
  const Layout back = read_layout_text(in);
  CHECK(layout_to_string(back) == text);
  CHECK(back.size_of(5) == 1000);
}

TEST_CASE("layout file rows must agree with the derived mapping") {
  const Layout layout = unit_sized_layout(6, 3, 2, 1);
  std::string text = layout_to_string(layout);
  // Tamper with file 4's vc column: "4 1 1 1 0 1000" -> vc 0.
  const auto pos = text.find("4 1 1 1 0 1000");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 14, "4 1 0 1 0 1000");
  std::istringstream in(text);
  CHECK_THROWS_WITH_AS(read_layout_text(in), doctest::Contains("disagrees"), IoError);
}

TEST_CASE("trace text round trip, delivery text round trip") {
  const Layout layout = unit_sized_layout(8, 2, 2, 2);
  const EpochTrace trace = generate_epoch_trace(layout, 77);
  std::ostringstream out;
  write_trace_text(out, layout, trace);
  std::istringstream in(out.str());
  const EpochTrace back = read_trace_text(in, layout);
  CHECK(back.order == trace.order);
  CHECK(back.epoch_seed == 77);

  const std::vector<DeliveryRecord> log = {{0, 3, 1}, {1, 2, 2}};
  const std::string text = delivery_to_string(8, log);
  CHECK(text == "redox-delivery v1 8\n0 3 1\n1 2 2\n");
  std::istringstream din(text);
  CHECK(read_delivery_text(din) == log);
}

TEST_CASE("header detection and malformed input") {
  CHECK(detect_kind("redox-layout v1 6 3 1 1 1 0") == TraceFileKind::layout);
  CHECK(detect_kind("redox-trace v1 8 2 7") == TraceFileKind::trace);
  CHECK(detect_kind("redox-delivery v1 8") == TraceFileKind::delivery);
  CHECK_THROWS_AS(detect_kind("something else"), IoError);

  std::istringstream bad("redox-delivery v1 4\n0 zero 1\n");
  CHECK_THROWS_AS(read_delivery_text(bad), IoError);

  std::istringstream truncated("redox-layout v1 6 3 1 1 1 0\n0 0 0 0 0 1000\n");
  CHECK_THROWS_WITH_AS(read_layout_text(truncated), doctest::Contains("truncated"), IoError);
}

TEST_CASE("defaults encode the tuned parameters") {
  const SimConfig config = default_sim_config();
  CHECK(config.layout.chunk_size == 64);
  CHECK(config.layout.pcs_size() == 8);
  CHECK(config.layout.remote_vc_budget == 1'500'000'000);
  CHECK(config.cost.seq_bandwidth == 7e9);
  CHECK(config.cost.rand_read_bandwidth == 4.1e9);
  CHECK(config.cost.net_bandwidth == 0.38e9);
  config.validate();
}

TEST_CASE("config json: round trip, strictness, manifest") {
  const SimConfig config = default_sim_config();
  const nlohmann::json j = sim_config_to_json(config);
  const SimConfig back = sim_config_from_json(j);
  CHECK(sim_config_to_json(back) == j);

  nlohmann::json unknown = j;
  unknown["chunk_sizee"] = 1;
  CHECK_THROWS_WITH_AS(sim_config_from_json(unknown), doctest::Contains("chunk_sizee"),
                       ConfigError);

  nlohmann::json bad_nested = j;
  bad_nested["layout"]["filez"] = 7;
  CHECK_THROWS_AS(sim_config_from_json(bad_nested), ConfigError);

  // Manifests re-parse to the identical config.
  const nlohmann::json manifest = make_manifest(config, "redox simulate");
  CHECK(manifest.at("tool_version") == kToolVersion);
  const SimConfig from_manifest = sim_config_from_json(manifest);
  CHECK(sim_config_to_json(from_manifest) == j);
}

TEST_CASE("precedence: overrides beat config keys beat defaults") {
  // default prefetch=true; file turns it off; override turns it back on.
  nlohmann::json file_cfg;
  file_cfg["prefetch"] = false;
  file_cfg["seed"] = 7;
  SimConfig config = sim_config_from_json(file_cfg);
  CHECK_FALSE(config.prefetch);
  CHECK(config.seed == 7);
  CHECK(config.layout.chunk_size == 64);  // untouched default

  CliOverrides overrides;
  overrides.prefetch = true;
  overrides.seed = 9;
  overrides.refill = RefillPolicy::random;
  apply_overrides(config, overrides);
  CHECK(config.prefetch);
  CHECK(config.seed == 9);
  CHECK(config.refill == RefillPolicy::random);
}

TEST_CASE("chunk-size override rescales M at fixed G, or fails loudly") {
  SimConfig config = default_sim_config();  // F=98304, K=64, M=192, G=8
  CliOverrides overrides;
  overrides.chunk_size = 32;
  apply_overrides(config, overrides);
  CHECK(config.layout.chunk_size == 32);
  CHECK(config.layout.virtual_chunks == 384);
  CHECK(config.layout.pcs_size() == 8);
  config.validate();

  overrides.chunk_size = 7;  // 98304 % 56 != 0
  CHECK_THROWS_WITH_AS(apply_overrides(config, overrides), doctest::Contains("chunk-size"),
                       ConfigError);
}

TEST_CASE("refill policy and scheduler names") {
  CHECK(refill_policy_from_name("greedy") == RefillPolicy::greedy);
  CHECK(refill_policy_from_name("first") == RefillPolicy::greedy_first);
  CHECK(refill_policy_from_name("random") == RefillPolicy::random);
  CHECK_THROWS_AS(refill_policy_from_name("bogus"), ConfigError);
  CHECK(scheduler_name(scheduler_from_name("jitter")) == "jitter");
  CHECK(refill_policy_name(RefillPolicy::greedy_first) == "first");
}
