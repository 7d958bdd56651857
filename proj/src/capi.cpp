#include "rcepc.h"

#include <cstdio>
#include <exception>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rcepc/experiment.hpp"
#include "rcepc/plot.hpp"
#include "rcepc/version.hpp"

struct rcepc_run {
  rcepc::ExperimentConfig config;
  std::string config_text;
  std::string error;
};

namespace {

thread_local std::string g_last_error;

rcepc_status fail(rcepc_run* run, rcepc_status code, const std::string& msg) {
  if (run) run->error = msg;
  else g_last_error = msg;
  return code;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_manifest(const rcepc_run& run, const std::string& path) {
  nlohmann::json manifest;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(
                    rcepc::config_hash(run.config_text)));
  manifest["config_hash"] = hash;
  manifest["seed"] = run.config.seed;
  manifest["library_version"] = rcepc::kVersion;
  std::vector<std::string> names;
  for (auto kind : run.config.precoders)
    names.emplace_back(rcepc::precoder_name(kind));
  manifest["precoders"] = names;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << manifest.dump(2) << "\n";
}

}  // namespace

extern "C" {

const char* rcepc_version(void) { return rcepc::kVersion; }

rcepc_status rcepc_run_create(const char* config_path, rcepc_run** out) {
  if (!out) return fail(nullptr, RCEPC_ERR_INVALID_ARGUMENT, "null output handle");
  *out = nullptr;
  if (!config_path)
    return fail(nullptr, RCEPC_ERR_INVALID_ARGUMENT, "null config path");
  try {
    auto run = std::make_unique<rcepc_run>();
    run->config_text = read_file(config_path);
    run->config = rcepc::parse_config_text(run->config_text);
    *out = run.release();
    return RCEPC_OK;
  } catch (const std::invalid_argument& e) {
    return fail(nullptr, RCEPC_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    return fail(nullptr, RCEPC_ERR_IO, e.what());
  }
}

void rcepc_run_destroy(rcepc_run* run) { delete run; }

rcepc_status rcepc_run_set_seed(rcepc_run* run, uint64_t seed) {
  if (!run) return fail(nullptr, RCEPC_ERR_INVALID_ARGUMENT, "null handle");
  run->config.seed = seed;
  return RCEPC_OK;
}

rcepc_status rcepc_run_set_precoders(rcepc_run* run, const char* precoders) {
  if (!run) return fail(nullptr, RCEPC_ERR_INVALID_ARGUMENT, "null handle");
  if (!precoders)
    return fail(run, RCEPC_ERR_INVALID_ARGUMENT, "null precoder list");
  try {
    std::vector<rcepc::PrecoderKind> kinds;
    std::stringstream ss(precoders);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto b = tok.find_first_not_of(" \t");
      const auto e = tok.find_last_not_of(" \t");
      if (b == std::string::npos) continue;
      kinds.push_back(rcepc::precoder_from_name(tok.substr(b, e - b + 1)));
    }
    if (kinds.empty())
      return fail(run, RCEPC_ERR_INVALID_ARGUMENT, "empty precoder list");
    run->config.precoders = std::move(kinds);
    return RCEPC_OK;
  } catch (const std::exception& e) {
    return fail(run, RCEPC_ERR_INVALID_ARGUMENT, e.what());
  }
}

rcepc_status rcepc_run_set_threads(rcepc_run* run, int threads) {
  if (!run) return fail(nullptr, RCEPC_ERR_INVALID_ARGUMENT, "null handle");
  if (threads < 1)
    return fail(run, RCEPC_ERR_INVALID_ARGUMENT, "threads must be >= 1");
  run->config.threads = threads;
  return RCEPC_OK;
}

rcepc_status rcepc_run_execute(rcepc_run* run, const char* out_dir) {
  if (!run) return fail(nullptr, RCEPC_ERR_INVALID_ARGUMENT, "null handle");
  if (!out_dir)
    return fail(run, RCEPC_ERR_INVALID_ARGUMENT, "null output directory");
  try {
    const auto rows = rcepc::run_experiment(run->config);
    const std::string dir(out_dir);
    rcepc::emit_csv(rows, dir + "/results.csv");
    write_manifest(*run, dir + "/manifest.json");
    return RCEPC_OK;
  } catch (const std::invalid_argument& e) {
    return fail(run, RCEPC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return fail(run, RCEPC_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(run, RCEPC_ERR_RUNTIME, e.what());
  }
}

const char* rcepc_run_error(const rcepc_run* run) {
  return run ? run->error.c_str() : g_last_error.c_str();
}

rcepc_status rcepc_plot(const char* csv_path, const char* axis,
                        const char* svg_path, int db_axis) {
  if (!csv_path || !axis || !svg_path)
    return fail(nullptr, RCEPC_ERR_INVALID_ARGUMENT, "null argument");
  try {
    const auto rows = rcepc::parse_csv_file(csv_path);
    rcepc::emit_plot(rows, rcepc::plot_axis_from_name(axis), svg_path,
                     db_axis != 0);
    return RCEPC_OK;
  } catch (const std::invalid_argument& e) {
    return fail(nullptr, RCEPC_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    return fail(nullptr, RCEPC_ERR_IO, e.what());
  }
}

const char* rcepc_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
