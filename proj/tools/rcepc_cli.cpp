// Command-line front end for the rcepc shared library. Talks to the C API
// only.
#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "rcepc.h"

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo harness for downlink MU-MISO precoding under "
               "per-antenna peak power constraints"};
  app.require_subcommand(1);

  std::string config_path, out_dir, precoders;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("--config", config_path, "Config file (key = value)")
      ->required();
  run->add_option("--out", out_dir, "Output directory (must exist)")
      ->required();
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--precoders", precoders,
                  "Comma list: wf_ideal,wf,lrce,nl_ce,nl_rce");
  run->add_option("--threads", threads, "Worker threads");

  std::string csv_path, axis = "available", svg_path;
  bool db_axis = false;
  auto* plot = app.add_subcommand("plot", "Render a BER curve SVG from a CSV");
  plot->add_option("--in", csv_path, "Results CSV")->required();
  plot->add_option("--axis", axis, "available | radiated | pa");
  plot->add_option("--out", svg_path, "Output SVG path")->required();
  plot->add_flag("--db", db_axis, "Power axis in dB");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    seed_set = run->count("--seed") > 0;
    rcepc_run* handle = nullptr;
    if (rcepc_run_create(config_path.c_str(), &handle) != RCEPC_OK) {
      std::fprintf(stderr, "error: %s\n", rcepc_last_error());
      return 1;
    }
    rcepc_status st = RCEPC_OK;
    if (seed_set) st = rcepc_run_set_seed(handle, seed);
    if (st == RCEPC_OK && !precoders.empty())
      st = rcepc_run_set_precoders(handle, precoders.c_str());
    if (st == RCEPC_OK && threads > 0)
      st = rcepc_run_set_threads(handle, threads);
    if (st == RCEPC_OK) st = rcepc_run_execute(handle, out_dir.c_str());
    if (st != RCEPC_OK) {
      std::fprintf(stderr, "error: %s\n", rcepc_run_error(handle));
      rcepc_run_destroy(handle);
      return 1;
    }
    std::printf("wrote %s/results.csv and %s/manifest.json\n", out_dir.c_str(),
                out_dir.c_str());
    rcepc_run_destroy(handle);
    return 0;
  }

  if (rcepc_plot(csv_path.c_str(), axis.c_str(), svg_path.c_str(),
                 db_axis ? 1 : 0) != RCEPC_OK) {
    std::fprintf(stderr, "error: %s\n", rcepc_last_error());
    return 1;
  }
  std::printf("wrote %s\n", svg_path.c_str());
  return 0;
}
