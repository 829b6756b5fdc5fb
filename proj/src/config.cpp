#include "redox/config.h"

#include <fstream>

#include "redox/error.h"

namespace redox {

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> known,
                const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok |= it.key() == k;
    if (!ok)
      throw ConfigError(std::string("unknown key \"") + it.key() + "\" in " + where);
  }
}

template <typename T>
void read_into(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string refill_policy_name(RefillPolicy policy) {
  switch (policy) {
    case RefillPolicy::greedy: return "greedy";
    case RefillPolicy::greedy_first: return "first";
    case RefillPolicy::random: return "random";
  }
  throw ConfigError("unknown refill policy");
}

RefillPolicy refill_policy_from_name(const std::string& name) {
  if (name == "greedy") return RefillPolicy::greedy;
  if (name == "first") return RefillPolicy::greedy_first;
  if (name == "random") return RefillPolicy::random;
  throw ConfigError("refill policy must be one of greedy|random|first, got \"" + name + "\"");
}

std::string scheduler_name(Scheduler scheduler) {
  return scheduler == Scheduler::round_robin ? "round_robin" : "jitter";
}

Scheduler scheduler_from_name(const std::string& name) {
  if (name == "round_robin") return Scheduler::round_robin;
  if (name == "jitter") return Scheduler::jitter;
  throw ConfigError("scheduler must be round_robin or jitter, got \"" + name + "\"");
}

SimConfig default_sim_config() {
  SimConfig config;
  config.layout.files = 98304;
  config.layout.chunk_size = 64;
  config.layout.virtual_chunks = 192;  // G = 8
  config.layout.nodes = 3;
  config.layout.prefetch_window = 8;
  config.layout.layout_seed = 1;
  config.layout.remote_vc_budget = 1'500'000'000;
  config.epochs = 1;
  config.seed = 42;
  config.prefetch = true;
  config.refill = RefillPolicy::greedy;
  config.batching = true;
  config.scheduler = Scheduler::round_robin;
  config.sizes.kind = SizeDistribution::Kind::fixed;
  config.sizes.fixed_bytes = 100'000;
  config.cost = CostModel{};
  return config;
}

SimConfig sim_config_from_json(const nlohmann::json& j) {
  const nlohmann::json* root = &j;
  if (j.contains("redox_manifest")) {
    if (!j.contains("config")) throw ConfigError("manifest has no \"config\" object");
    root = &j.at("config");
  }
  check_keys(*root,
             {"layout", "epochs", "seed", "prefetch", "refill_policy", "batching",
              "scheduler", "size_distribution", "cost_model"},
             "config");

  SimConfig config = default_sim_config();
  if (root->contains("layout")) {
    const auto& l = root->at("layout");
    check_keys(l,
               {"files", "chunk_size", "virtual_chunks", "nodes", "prefetch_window",
                "layout_seed", "remote_vc_budget"},
               "config.layout");
    read_into(l, "files", config.layout.files);
    read_into(l, "chunk_size", config.layout.chunk_size);
    read_into(l, "virtual_chunks", config.layout.virtual_chunks);
    read_into(l, "nodes", config.layout.nodes);
    read_into(l, "prefetch_window", config.layout.prefetch_window);
    read_into(l, "layout_seed", config.layout.layout_seed);
    read_into(l, "remote_vc_budget", config.layout.remote_vc_budget);
  }
  read_into(*root, "epochs", config.epochs);
  read_into(*root, "seed", config.seed);
  read_into(*root, "prefetch", config.prefetch);
  if (root->contains("refill_policy"))
    config.refill = refill_policy_from_name(root->at("refill_policy").get<std::string>());
  read_into(*root, "batching", config.batching);
  if (root->contains("scheduler"))
    config.scheduler = scheduler_from_name(root->at("scheduler").get<std::string>());

  if (root->contains("size_distribution")) {
    const auto& s = root->at("size_distribution");
    check_keys(s, {"type", "bytes", "min", "max", "log_mean", "log_sigma"},
               "config.size_distribution");
    const std::string type = s.at("type").get<std::string>();
    if (type == "fixed") {
      config.sizes.kind = SizeDistribution::Kind::fixed;
      read_into(s, "bytes", config.sizes.fixed_bytes);
    } else if (type == "uniform") {
      config.sizes.kind = SizeDistribution::Kind::uniform;
      read_into(s, "min", config.sizes.min_bytes);
      read_into(s, "max", config.sizes.max_bytes);
    } else if (type == "lognormal") {
      config.sizes.kind = SizeDistribution::Kind::lognormal;
      read_into(s, "log_mean", config.sizes.log_mean);
      read_into(s, "log_sigma", config.sizes.log_sigma);
    } else {
      throw ConfigError("size_distribution.type must be fixed|uniform|lognormal");
    }
  }

  if (root->contains("cost_model")) {
    const auto& c = root->at("cost_model");
    check_keys(c,
               {"seq_bandwidth", "rand_read_bandwidth", "per_io_latency", "net_bandwidth",
                "net_latency"},
               "config.cost_model");
    read_into(c, "seq_bandwidth", config.cost.seq_bandwidth);
    read_into(c, "rand_read_bandwidth", config.cost.rand_read_bandwidth);
    read_into(c, "per_io_latency", config.cost.per_io_latency);
    read_into(c, "net_bandwidth", config.cost.net_bandwidth);
    read_into(c, "net_latency", config.cost.net_latency);
  }
  return config;
}

SimConfig load_sim_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("cannot parse " + path + ": " + ex.what());
  }
  return sim_config_from_json(j);
}

nlohmann::json sim_config_to_json(const SimConfig& config) {
  nlohmann::json j;
  j["layout"] = {
      {"files", config.layout.files},
      {"chunk_size", config.layout.chunk_size},
      {"virtual_chunks", config.layout.virtual_chunks},
      {"nodes", config.layout.nodes},
      {"prefetch_window", config.layout.prefetch_window},
      {"layout_seed", config.layout.layout_seed},
      {"remote_vc_budget", config.layout.remote_vc_budget},
  };
  j["epochs"] = config.epochs;
  j["seed"] = config.seed;
  j["prefetch"] = config.prefetch;
  j["refill_policy"] = refill_policy_name(config.refill);
  j["batching"] = config.batching;
  j["scheduler"] = scheduler_name(config.scheduler);
  switch (config.sizes.kind) {
    case SizeDistribution::Kind::fixed:
      j["size_distribution"] = {{"type", "fixed"}, {"bytes", config.sizes.fixed_bytes}};
      break;
    case SizeDistribution::Kind::uniform:
      j["size_distribution"] = {{"type", "uniform"},
                                {"min", config.sizes.min_bytes},
                                {"max", config.sizes.max_bytes}};
      break;
    case SizeDistribution::Kind::lognormal:
      j["size_distribution"] = {{"type", "lognormal"},
                                {"log_mean", config.sizes.log_mean},
                                {"log_sigma", config.sizes.log_sigma}};
      break;
  }
  j["cost_model"] = {
      {"seq_bandwidth", config.cost.seq_bandwidth},
      {"rand_read_bandwidth", config.cost.rand_read_bandwidth},
      {"per_io_latency", config.cost.per_io_latency},
      {"net_bandwidth", config.cost.net_bandwidth},
      {"net_latency", config.cost.net_latency},
  };
  return j;
}

void apply_overrides(SimConfig& config, const CliOverrides& overrides) {
  if (overrides.prefetch) config.prefetch = *overrides.prefetch;
  if (overrides.refill) config.refill = *overrides.refill;
  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.epochs) config.epochs = *overrides.epochs;
  if (overrides.scheduler) config.scheduler = scheduler_from_name(*overrides.scheduler);
  if (overrides.chunk_size) {
    const uint64_t g = config.layout.pcs_size();
    const uint64_t k = *overrides.chunk_size;
    if (k == 0 || config.layout.files % (k * g) != 0)
      throw ConfigError("--chunk-size " + std::to_string(k) + " does not divide F=" +
                        std::to_string(config.layout.files) + " at fixed PCS size G=" +
                        std::to_string(g));
    config.layout.chunk_size = k;
    config.layout.virtual_chunks = config.layout.files / (k * g);
    if (config.layout.virtual_chunks % config.layout.nodes != 0)
      throw ConfigError("--chunk-size " + std::to_string(k) +
                        " makes M indivisible by the node count");
  }
}

CliOverrides overrides_from_json(const nlohmann::json& j) {
  check_keys(j, {"prefetch", "refill_policy", "chunk_size", "seed", "epochs", "scheduler"},
             "overrides");
  CliOverrides o;
  if (j.contains("prefetch")) o.prefetch = j.at("prefetch").get<bool>();
  if (j.contains("refill_policy"))
    o.refill = refill_policy_from_name(j.at("refill_policy").get<std::string>());
  if (j.contains("chunk_size")) o.chunk_size = j.at("chunk_size").get<uint64_t>();
  if (j.contains("seed")) o.seed = j.at("seed").get<uint64_t>();
  if (j.contains("epochs")) o.epochs = j.at("epochs").get<uint64_t>();
  if (j.contains("scheduler")) o.scheduler = j.at("scheduler").get<std::string>();
  return o;
}

nlohmann::json make_manifest(const SimConfig& config, const std::string& command_line) {
  nlohmann::json j;
  j["redox_manifest"] = 1;
  j["tool_version"] = kToolVersion;
  j["command_line"] = command_line;
  j["config"] = sim_config_to_json(config);
  return j;
}

}  // namespace redox
