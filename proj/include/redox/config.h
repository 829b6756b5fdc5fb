#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "redox/sim.h"

namespace redox {

inline constexpr const char* kToolVersion = "redox 0.1.0";

// Fully-resolved defaults: the tuned chunk size (64), a three-node synthetic
// dataset, and the NVMe/interconnect cost figures.
SimConfig default_sim_config();

// Strict parser: unknown keys are configuration errors. Accepts either a
// bare config object or a run manifest (the config under its "config" key).
SimConfig sim_config_from_json(const nlohmann::json& j);
SimConfig load_sim_config(const std::string& path);

nlohmann::json sim_config_to_json(const SimConfig& config);

// Command-line values that take precedence over config-file keys.
struct CliOverrides {
  std::optional<bool> prefetch;
  std::optional<RefillPolicy> refill;
  std::optional<uint64_t> chunk_size;  // rescales M to F/(K*G) at fixed G
  std::optional<uint64_t> seed;
  std::optional<uint64_t> epochs;
  std::optional<std::string> scheduler;
};

void apply_overrides(SimConfig& config, const CliOverrides& overrides);

// Overrides as JSON: {"prefetch": bool, "refill_policy": str, "chunk_size": n,
// "seed": n, "epochs": n, "scheduler": str}. Unknown keys are errors.
CliOverrides overrides_from_json(const nlohmann::json& j);

// Re-running a manifest reproduces outputs bit-identically.
nlohmann::json make_manifest(const SimConfig& config, const std::string& command_line);

std::string refill_policy_name(RefillPolicy policy);
RefillPolicy refill_policy_from_name(const std::string& name);
std::string scheduler_name(Scheduler scheduler);
Scheduler scheduler_from_name(const std::string& name);

}  // namespace redox
