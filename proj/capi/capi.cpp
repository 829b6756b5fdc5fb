#include "redox.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "redox/config.h"
#include "redox/container.h"
#include "redox/error.h"
#include "redox/randomness.h"
#include "redox/sim.h"
#include "redox/textio.h"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
redox_status wrap(Fn&& fn) {
  try {
    fn();
    return REDOX_OK;
  } catch (const redox::ConfigError& ex) {
    set_error(ex.what());
    return REDOX_ERR_CONFIG;
  } catch (const redox::InvariantViolation& ex) {
    set_error(ex.what());
    return REDOX_ERR_INVARIANT;
  } catch (const redox::IoError& ex) {
    set_error(ex.what());
    return REDOX_ERR_IO;
  } catch (const nlohmann::json::exception& ex) {
    set_error(std::string("json: ") + ex.what());
    return REDOX_ERR_CONFIG;
  } catch (const std::exception& ex) {
    set_error(ex.what());
    return REDOX_ERR_IO;
  }
}

redox::SimConfig parse_config(const char* config_json) {
  if (config_json == nullptr) return redox::default_sim_config();
  return redox::sim_config_from_json(nlohmann::json::parse(config_json));
}

redox::Layout load_layout_file(const char* path) {
  if (path == nullptr) throw redox::ConfigError("layout path is null");
  std::ifstream in(path);
  if (!in) throw redox::IoError(std::string("cannot open layout file ") + path);
  return redox::read_layout_text(in);
}

std::string render(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

struct redox_sim {
  redox::SimConfig config;
  std::optional<redox::SimResult> result;
};

extern "C" {

const char* redox_version(void) { return redox::kToolVersion; }

const char* redox_last_error(void) { return g_last_error.c_str(); }

void redox_string_free(char* s) { std::free(s); }

redox_status redox_config_resolve(const char* config_json, const char* overrides_json,
                                  char** out_config_json) {
  return wrap([&] {
    if (out_config_json == nullptr) throw redox::ConfigError("out_config_json is null");
    redox::SimConfig config = parse_config(config_json);
    if (overrides_json != nullptr)
      redox::apply_overrides(config,
                             redox::overrides_from_json(nlohmann::json::parse(overrides_json)));
    config.validate();
    *out_config_json = dup_string(render(redox::sim_config_to_json(config)));
  });
}

redox_status redox_sim_create(const char* config_json, redox_sim** out_sim) {
  return wrap([&] {
    if (out_sim == nullptr) throw redox::ConfigError("out_sim is null");
    auto sim = std::make_unique<redox_sim>();
    sim->config = parse_config(config_json);
    sim->config.validate();
    *out_sim = sim.release();
  });
}

void redox_sim_free(redox_sim* sim) { delete sim; }

redox_status redox_sim_run(redox_sim* sim, char** out_report_json) {
  return wrap([&] {
    if (sim == nullptr) throw redox::ConfigError("sim handle is null");
    sim->result = redox::run_simulation(sim->config);
    if (out_report_json) {
      nlohmann::json report;
      report["epochs"] = nlohmann::json::array();
      for (const auto& m : sim->result->epochs) report["epochs"].push_back(m.to_json());
      report["totals"] = sim->result->totals.to_json();
      *out_report_json = dup_string(render(report));
    }
  });
}

redox_status redox_sim_delivery_log(redox_sim* sim, char** out_text) {
  return wrap([&] {
    if (sim == nullptr) throw redox::ConfigError("sim handle is null");
    if (out_text == nullptr) throw redox::ConfigError("out_text is null");
    if (!sim->result) throw redox::ConfigError("no run to export; call redox_sim_run first");
    *out_text = dup_string(redox::delivery_to_string(sim->config.layout.files,
                                                     sim->result->deliveries.back()));
  });
}

redox_status redox_sim_layout_text(redox_sim* sim, char** out_text) {
  return wrap([&] {
    if (sim == nullptr) throw redox::ConfigError("sim handle is null");
    if (out_text == nullptr) throw redox::ConfigError("out_text is null");
    const auto sizes = redox::generate_sizes(sim->config.sizes, sim->config.layout.files,
                                             sim->config.sizes_seed());
    const redox::Layout layout = redox::build_layout(sim->config.layout, sizes);
    *out_text = dup_string(redox::layout_to_string(layout));
  });
}

redox_status redox_sim_trace_text(redox_sim* sim, uint64_t epoch, char** out_text) {
  return wrap([&] {
    if (sim == nullptr) throw redox::ConfigError("sim handle is null");
    if (out_text == nullptr) throw redox::ConfigError("out_text is null");
    if (epoch >= sim->config.epochs)
      throw redox::ConfigError("epoch " + std::to_string(epoch) + " out of range");
    const auto sizes = redox::generate_sizes(sim->config.sizes, sim->config.layout.files,
                                             sim->config.sizes_seed());
    const redox::Layout layout = redox::build_layout(sim->config.layout, sizes);
    const redox::EpochTrace trace =
        redox::generate_epoch_trace(layout, sim->config.epoch_seed(epoch));
    std::ostringstream out;
    redox::write_trace_text(out, layout, trace);
    *out_text = dup_string(out.str());
  });
}

redox_status redox_sim_config_json(redox_sim* sim, char** out_json) {
  return wrap([&] {
    if (sim == nullptr) throw redox::ConfigError("sim handle is null");
    if (out_json == nullptr) throw redox::ConfigError("out_json is null");
    *out_json = dup_string(render(redox::sim_config_to_json(sim->config)));
  });
}

redox_status redox_sim_manifest(redox_sim* sim, const char* command_line,
                                char** out_json) {
  return wrap([&] {
    if (sim == nullptr) throw redox::ConfigError("sim handle is null");
    if (out_json == nullptr) throw redox::ConfigError("out_json is null");
    *out_json = dup_string(
        render(redox::make_manifest(sim->config, command_line ? command_line : "")));
  });
}

redox_status redox_ablate(const char* config_json, char** out_csv) {
  return wrap([&] {
    if (out_csv == nullptr) throw redox::ConfigError("out_csv is null");
    const auto rows = redox::run_ablation(parse_config(config_json));
    *out_csv = dup_string(redox::ablation_csv(rows));
  });
}

redox_status redox_chunk_sweep(const char* config_json, const uint64_t* chunk_sizes,
                               uint64_t count, char** out_csv) {
  return wrap([&] {
    if (out_csv == nullptr) throw redox::ConfigError("out_csv is null");
    if (chunk_sizes == nullptr || count == 0)
      throw redox::ConfigError("chunk sweep needs at least one chunk size");
    const std::vector<uint64_t> ks(chunk_sizes, chunk_sizes + count);
    const auto rows = redox::run_chunk_sweep(parse_config(config_json), ks);
    *out_csv = dup_string(redox::sweep_csv(rows));
  });
}

redox_status redox_randomness(uint64_t files, uint64_t virtual_chunks,
                              uint64_t chunk_size, int enumerate, uint64_t trials,
                              double alpha, uint64_t seed, char** out_json) {
  return wrap([&] {
    if (out_json == nullptr) throw redox::ConfigError("out_json is null");
    const auto bound = redox::compute_bound(files, virtual_chunks, chunk_size);
    nlohmann::json j;
    j["bound"] = bound.to_json();
    if (enumerate != 0)
      j["reachable_sequences"] = redox::enumerate_reachable(bound.per_vc_files, chunk_size);
    if (trials > 0)
      j["uniformity"] =
          redox::position_uniformity(chunk_size, bound.pcs_size, trials, alpha, seed)
              .to_json();
    *out_json = dup_string(render(j));
  });
}

redox_status redox_pack(const char* layout_path, const char* source,
                        const char* out_dir, uint64_t payload_seed,
                        char** out_summary_json) {
  return wrap([&] {
    if (source == nullptr || out_dir == nullptr)
      throw redox::ConfigError("pack: source and out_dir are required");
    const redox::Layout layout = load_layout_file(layout_path);
    std::unique_ptr<redox::PayloadSource> payloads;
    if (std::string(source) == "synthetic")
      payloads = std::make_unique<redox::SyntheticPayloads>(payload_seed,
                                                            layout.file_sizes());
    else
      payloads = std::make_unique<redox::DirectoryPayloads>(source);
    redox::pack_chunks(layout, *payloads, out_dir);
    if (out_summary_json) {
      uint64_t bytes = 0;
      for (uint64_t pc = 0; pc < layout.config().physical_chunks(); ++pc)
        bytes += redox::chunk_header_bytes(layout.chunk_size()) + layout.chunk_bytes(pc);
      nlohmann::json j;
      j["chunks"] = layout.config().physical_chunks();
      j["chunk_size"] = layout.chunk_size();
      j["container_bytes"] = bytes;
      j["out_dir"] = out_dir;
      *out_summary_json = dup_string(render(j));
    }
  });
}

redox_status redox_verify(const char* trace_path, const char* layout_path,
                          char** out_report_json) {
  std::optional<bool> ok;
  const redox_status status = wrap([&] {
    if (trace_path == nullptr) throw redox::ConfigError("trace path is null");
    const redox::Layout layout = load_layout_file(layout_path);
    std::ifstream in(trace_path);
    if (!in) throw redox::IoError(std::string("cannot open trace file ") + trace_path);
    std::string header;
    if (!std::getline(in, header)) throw redox::IoError("empty trace file");
    const redox::TraceFileKind kind = redox::detect_kind(header);
    in.seekg(0);

    redox::VerifyReport report;
    if (kind == redox::TraceFileKind::delivery) {
      report = redox::verify_delivery(layout, redox::read_delivery_text(in));
    } else if (kind == redox::TraceFileKind::trace) {
      report = redox::verify_trace(layout, redox::read_trace_text(in, layout));
    } else {
      throw redox::ConfigError("verify expects a redox-delivery or redox-trace file");
    }
    ok = report.ok;
    if (out_report_json) *out_report_json = dup_string(render(report.to_json()));
    if (!report.ok) set_error("verification found violations; see report");
  });
  if (status != REDOX_OK) return status;
  return (ok && !*ok) ? REDOX_ERR_INVARIANT : REDOX_OK;
}

}  // extern "C"
