#ifndef RCEPC_EXPERIMENT_HPP
#define RCEPC_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rcepc/linear_precoder.hpp"
#include "rcepc/symbolwise_precoder.hpp"

namespace rcepc {

enum class PrecoderKind {
  wf_ideal,  // Wiener filter, amplifier bypassed
  wf,        // Wiener filter through the clipping amplifier
  lrce,      // linear relaxed-CE fit
  nl_ce,     // symbol-wise constant envelope
  nl_rce,    // symbol-wise relaxed
};

const char* precoder_name(PrecoderKind kind);
PrecoderKind precoder_from_name(const std::string& name);

struct ExperimentConfig {
  int antennas = 100;           // N
  int users = 10;               // M
  int constellation_order = 16;
  int block_length = 1000;      // N_b symbols per channel realization
  int channel_realizations = 20;
  std::vector<double> ptx_sweep;  // linear watts
  std::vector<PrecoderKind> precoders;
  LrceSettings lrce;
  SymbolwiseSettings symbolwise;  // mode field is ignored; set per precoder
  std::uint64_t seed = 1;
  bool genie_gain = false;  // use the design-time f instead of blind estimates
  int threads = 1;
};

// key = value text with [lrce] and [symbolwise] sections; see README for the
// full key list. The P_tx sweep accepts either an explicit comma list of
// linear watts or dB:start:step:stop.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

std::vector<double> parse_ptx_sweep(const std::string& value);

struct ResultRow {
  std::string precoder;
  double ptx = 0.0;
  double radiated = 0.0;
  double pa_power = 0.0;
  double ber = 0.0;
  int realizations = 0;
  std::uint64_t seed = 0;
};

// Runs the full chain (precode, amplify, channel, noise, blind gain, detect)
// for every (P_tx, precoder) pair, pooling bit errors and averaging powers
// over the channel realizations. Output is independent of the thread count.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

std::string csv_string(const std::vector<ResultRow>& rows);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> parse_csv_text(const std::string& text);
std::vector<ResultRow> parse_csv_file(const std::string& path);

// fnv-1a of the raw config text, recorded in the run manifest.
std::uint64_t config_hash(const std::string& text);

}  // namespace rcepc

#endif
