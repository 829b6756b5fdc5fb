// Operator CLI for the redox simulator. Everything protocol-related goes
// through the C API in redox.h; this file only parses flags, moves files
// around, and prints summaries.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "redox.h"

namespace {

int status_to_exit(redox_status status) {
  switch (status) {
    case REDOX_OK: return 0;
    case REDOX_ERR_INVARIANT: return 1;
    default: return 2;  // config and I/O problems are both operator errors
  }
}

[[noreturn]] void die(redox_status status) {
  std::cerr << "error: " << redox_last_error() << "\n";
  std::exit(status_to_exit(status));
}

void check(redox_status status) {
  if (status != REDOX_OK) die(status);
}

// Takes ownership of a C string from the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  redox_string_free(s);
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(2);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(2);
  }
  out << text;
}

std::string join_argv(int argc, char** argv) {
  std::string line;
  for (int i = 0; i < argc; ++i) {
    if (i) line += ' ';
    line += argv[i];
  }
  return line;
}

struct SimFlags {
  std::string config_path;
  std::string out_dir = ".";
  std::string prefetch;  // on|off
  std::string refill;    // greedy|random|first
  std::string scheduler;
  std::optional<uint64_t> chunk_size;
  std::optional<uint64_t> seed;
  std::optional<uint64_t> epochs;
};

std::string resolve_config(const SimFlags& flags) {
  nlohmann::json overrides = nlohmann::json::object();
  if (!flags.prefetch.empty()) overrides["prefetch"] = flags.prefetch == "on";
  if (!flags.refill.empty()) overrides["refill_policy"] = flags.refill;
  if (!flags.scheduler.empty()) overrides["scheduler"] = flags.scheduler;
  if (flags.chunk_size) overrides["chunk_size"] = *flags.chunk_size;
  if (flags.seed) overrides["seed"] = *flags.seed;
  if (flags.epochs) overrides["epochs"] = *flags.epochs;

  std::optional<std::string> config_text;
  if (!flags.config_path.empty()) config_text = read_text_file(flags.config_path);

  char* resolved = nullptr;
  check(redox_config_resolve(config_text ? config_text->c_str() : nullptr,
                             overrides.empty() ? nullptr : overrides.dump().c_str(),
                             &resolved));
  return take(resolved);
}

void write_manifest(const std::string& out_dir, const std::string& config_json,
                    const std::string& command_line) {
  redox_sim* sim = nullptr;
  check(redox_sim_create(config_json.c_str(), &sim));
  char* manifest = nullptr;
  const redox_status status = redox_sim_manifest(sim, command_line.c_str(), &manifest);
  redox_sim_free(sim);
  check(status);
  write_text_file(out_dir + "/manifest.json", take(manifest));
}

void print_totals(const std::string& report_json) {
  const auto report = nlohmann::json::parse(report_json);
  const auto& t = report.at("totals");
  std::cout << "epochs: " << report.at("epochs").size() << "\n"
            << "simulated epoch time (s, summed): " << t.at("simulated_epoch_time")
            << "\n"
            << "memory misses: " << t.at("memory_misses") << "\n"
            << "remote on-demand requests: " << t.at("remote_on_demand_requests") << "\n"
            << "files read from disk: " << t.at("files_read_from_disk") << "\n"
            << "files wasted: " << t.at("files_wasted") << "\n"
            << "network bytes: " << t.at("network_bytes") << "\n";
  const auto& epochs = report.at("epochs");
  for (const auto& e : epochs)
    if (e.at("undelivered").get<uint64_t>() > 0)
      std::cout << "warning: epoch " << e.at("epoch") << " left " << e.at("undelivered")
                << " files undelivered\n";
}

int cmd_simulate(const SimFlags& flags, bool emit_trace, bool emit_layout,
                 bool emit_epoch_trace, const std::string& command_line) {
  const std::string config = resolve_config(flags);
  std::filesystem::create_directories(flags.out_dir);

  redox_sim* sim = nullptr;
  check(redox_sim_create(config.c_str(), &sim));
  std::unique_ptr<redox_sim, decltype(&redox_sim_free)> guard(sim, &redox_sim_free);

  char* report = nullptr;
  check(redox_sim_run(sim, &report));
  const std::string report_json = take(report);
  write_text_file(flags.out_dir + "/report.json", report_json);

  char* manifest = nullptr;
  check(redox_sim_manifest(sim, command_line.c_str(), &manifest));
  write_text_file(flags.out_dir + "/manifest.json", take(manifest));

  if (emit_trace) {
    char* text = nullptr;
    check(redox_sim_delivery_log(sim, &text));
    write_text_file(flags.out_dir + "/delivery.txt", take(text));
  }
  if (emit_layout) {
    char* text = nullptr;
    check(redox_sim_layout_text(sim, &text));
    write_text_file(flags.out_dir + "/layout.txt", take(text));
  }
  if (emit_epoch_trace) {
    char* text = nullptr;
    check(redox_sim_trace_text(sim, 0, &text));
    write_text_file(flags.out_dir + "/epoch_trace.txt", take(text));
  }

  print_totals(report_json);
  std::cout << "report: " << flags.out_dir << "/report.json\n";
  return 0;
}

int cmd_ablate(const SimFlags& flags, bool sweep, const std::string& command_line) {
  const std::string config = resolve_config(flags);
  std::filesystem::create_directories(flags.out_dir);

  if (sweep) {
    const std::vector<uint64_t> ks = {2, 4, 8, 16, 32, 64, 128, 256};
    char* csv = nullptr;
    check(redox_chunk_sweep(config.c_str(), ks.data(), ks.size(), &csv));
    const std::string text = take(csv);
    write_text_file(flags.out_dir + "/chunk_sweep.csv", text);
    std::cout << text;
  } else {
    char* csv = nullptr;
    check(redox_ablate(config.c_str(), &csv));
    const std::string text = take(csv);
    write_text_file(flags.out_dir + "/ablation.csv", text);
    std::cout << text;
  }
  write_manifest(flags.out_dir, config, command_line);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"redox: file-redirection training-data I/O simulator"};
  app.require_subcommand(1);
  const std::string command_line = join_argv(argc, argv);

  // simulate
  SimFlags sim_flags;
  bool emit_trace = false, emit_layout = false, emit_epoch_trace = false;
  auto* simulate = app.add_subcommand("simulate", "run epochs and report metrics");
  simulate->add_option("--config", sim_flags.config_path,
                       "config JSON (or a manifest from a prior run)");
  simulate->add_option("--out", sim_flags.out_dir, "output directory")->capture_default_str();
  simulate->add_option("--prefetch", sim_flags.prefetch, "on|off")
      ->check(CLI::IsMember({"on", "off"}));
  simulate->add_option("--refill", sim_flags.refill, "greedy|random|first")
      ->check(CLI::IsMember({"greedy", "random", "first"}));
  simulate->add_option("--scheduler", sim_flags.scheduler, "round_robin|jitter")
      ->check(CLI::IsMember({"round_robin", "jitter"}));
  simulate->add_option("--chunk-size", sim_flags.chunk_size,
                       "override K; M rescales to F/(K*G)");
  simulate->add_option("--seed", sim_flags.seed, "master seed");
  simulate->add_option("--epochs", sim_flags.epochs, "epoch count");
  simulate->add_flag("--emit-trace", emit_trace, "write the delivery log");
  simulate->add_flag("--emit-layout", emit_layout, "write the layout table");
  simulate->add_flag("--emit-epoch-trace", emit_epoch_trace,
                     "write epoch 0's access order");

  // ablate
  SimFlags ablate_flags;
  bool sweep = false;
  auto* ablate = app.add_subcommand("ablate", "four-variant breakdown on one trace");
  ablate->add_option("--config", ablate_flags.config_path, "config JSON");
  ablate->add_option("--out", ablate_flags.out_dir, "output directory")->capture_default_str();
  ablate->add_option("--seed", ablate_flags.seed, "master seed");
  ablate->add_flag("--sweep", sweep, "chunk-size sensitivity sweep instead");

  // randomness
  uint64_t r_files = 0, r_vcs = 0, r_k = 0, r_trials = 0, r_seed = 7;
  double r_alpha = 0.001;
  bool r_enumerate = false;
  std::string r_out;
  auto* randomness = app.add_subcommand("randomness", "redirection randomness accounting");
  randomness->add_option("--F", r_files, "total files")->required();
  randomness->add_option("--M", r_vcs, "virtual chunks")->required();
  randomness->add_option("--K", r_k, "chunk size")->required();
  randomness->add_flag("--enumerate", r_enumerate,
                       "exhaustively count reachable delivery sequences");
  randomness->add_option("--trials", r_trials, "chi-square diagnostic trials");
  randomness->add_option("--alpha", r_alpha, "diagnostic significance level")
      ->capture_default_str();
  randomness->add_option("--seed", r_seed, "diagnostic seed")->capture_default_str();
  randomness->add_option("--out", r_out, "also write randomness.json + manifest here");

  // pack
  std::string p_layout, p_source, p_out;
  uint64_t p_payload_seed = 0;
  auto* pack = app.add_subcommand("pack", "write packed chunk containers");
  pack->add_option("--layout", p_layout, "redox-layout v1 file")->required();
  pack->add_option("--source", p_source, "payload directory or 'synthetic'")->required();
  pack->add_option("--out", p_out, "output directory")->required();
  auto* payload_seed_opt =
      pack->add_option("--payload-seed", p_payload_seed, "synthetic payload seed")
          ->capture_default_str();
  uint64_t p_seed = 0;
  auto* pack_seed_opt = pack->add_option("--seed", p_seed, "alias for --payload-seed");

  // verify
  std::string v_trace, v_layout;
  uint64_t v_seed = 0;  // accepted for interface uniformity; a pure check needs none
  auto* verify = app.add_subcommand("verify", "check a delivery log or trace");
  verify->add_option("--trace", v_trace, "redox-delivery or redox-trace file")->required();
  verify->add_option("--layout", v_layout, "redox-layout v1 file")->required();
  verify->add_option("--seed", v_seed, "unused; verification is deterministic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (simulate->parsed())
    return cmd_simulate(sim_flags, emit_trace, emit_layout, emit_epoch_trace,
                        command_line);

  if (ablate->parsed()) return cmd_ablate(ablate_flags, sweep, command_line);

  if (randomness->parsed()) {
    char* json = nullptr;
    check(redox_randomness(r_files, r_vcs, r_k, r_enumerate ? 1 : 0, r_trials, r_alpha,
                           r_seed, &json));
    const std::string text = take(json);
    std::cout << text;
    if (!r_out.empty()) {
      std::filesystem::create_directories(r_out);
      write_text_file(r_out + "/randomness.json", text);
      nlohmann::json manifest;
      manifest["redox_manifest"] = 1;
      manifest["tool_version"] = redox_version();
      manifest["command_line"] = command_line;
      manifest["params"] = {{"F", r_files},     {"M", r_vcs},     {"K", r_k},
                            {"enumerate", r_enumerate}, {"trials", r_trials},
                            {"alpha", r_alpha}, {"seed", r_seed}};
      write_text_file(r_out + "/manifest.json", manifest.dump(2) + "\n");
    }
    return 0;
  }

  if (pack->parsed()) {
    if (!*payload_seed_opt && *pack_seed_opt) p_payload_seed = p_seed;
    char* summary = nullptr;
    check(redox_pack(p_layout.c_str(), p_source.c_str(), p_out.c_str(), p_payload_seed,
                     &summary));
    const std::string text = take(summary);
    std::cout << text;
    nlohmann::json manifest;
    manifest["redox_manifest"] = 1;
    manifest["tool_version"] = redox_version();
    manifest["command_line"] = command_line;
    manifest["params"] = {{"layout", p_layout},
                          {"source", p_source},
                          {"out", p_out},
                          {"payload_seed", p_payload_seed}};
    write_text_file(p_out + "/manifest.json", manifest.dump(2) + "\n");
    return 0;
  }

  if (verify->parsed()) {
    char* report = nullptr;
    const redox_status status = redox_verify(v_trace.c_str(), v_layout.c_str(), &report);
    if (report) std::cout << take(report);
    if (status != REDOX_OK && status != REDOX_ERR_INVARIANT) die(status);
    return status_to_exit(status);
  }

  return 2;
}
