#include "rcepc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rcepc/pa_model.hpp"
#include "rcepc/receiver.hpp"
#include "rcepc/rng.hpp"

namespace rcepc {

const char* precoder_name(PrecoderKind kind) {
  switch (kind) {
    case PrecoderKind::wf_ideal: return "wf_ideal";
    case PrecoderKind::wf: return "wf";
    case PrecoderKind::lrce: return "lrce";
    case PrecoderKind::nl_ce: return "nl_ce";
    case PrecoderKind::nl_rce: return "nl_rce";
  }
  throw std::logic_error("unknown precoder kind");
}

PrecoderKind precoder_from_name(const std::string& name) {
  if (name == "wf_ideal") return PrecoderKind::wf_ideal;
  if (name == "wf") return PrecoderKind::wf;
  if (name == "lrce") return PrecoderKind::lrce;
  if (name == "nl_ce") return PrecoderKind::nl_ce;
  if (name == "nl_rce") return PrecoderKind::nl_rce;
  throw std::invalid_argument("unknown precoder: " + name);
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("invalid boolean value: " + v);
}

double parse_double(const std::string& v) {
  std::size_t pos = 0;
  const double d = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("invalid number: " + v);
  return d;
}

}  // namespace

std::vector<double> parse_ptx_sweep(const std::string& value) {
  std::vector<double> out;
  if (value.rfind("dB:", 0) == 0) {
    const auto parts = split(value.substr(3), ':');
    if (parts.size() != 3)
      throw std::invalid_argument("ptx_sweep dB form is dB:start:step:stop");
    const double start = parse_double(parts[0]);
    const double step = parse_double(parts[1]);
    const double stop = parse_double(parts[2]);
    if (step <= 0.0) throw std::invalid_argument("ptx_sweep: step must be > 0");
    for (double d = start; d <= stop + 1e-9; d += step)
      out.push_back(std::pow(10.0, d / 10.0));
  } else {
    for (const auto& tok : split(value, ','))
      if (!tok.empty()) out.push_back(parse_double(tok));
  }
  if (out.empty()) throw std::invalid_argument("ptx_sweep: empty sweep");
  for (double p : out)
    if (p <= 0.0) throw std::invalid_argument("ptx_sweep: powers must be > 0");
  return out;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  cfg.ptx_sweep = {1.0};
  cfg.precoders = {PrecoderKind::wf_ideal, PrecoderKind::wf, PrecoderKind::lrce,
                   PrecoderKind::nl_ce, PrecoderKind::nl_rce};

  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      if (section != "lrce" && section != "symbolwise")
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    try {
      if (section.empty()) {
        if (key == "antennas" || key == "N") cfg.antennas = int(parse_double(value));
        else if (key == "users" || key == "M") cfg.users = int(parse_double(value));
        else if (key == "constellation_order") cfg.constellation_order = int(parse_double(value));
        else if (key == "block_length") cfg.block_length = int(parse_double(value));
        else if (key == "channel_realizations") cfg.channel_realizations = int(parse_double(value));
        else if (key == "ptx_sweep") cfg.ptx_sweep = parse_ptx_sweep(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "genie_gain") cfg.genie_gain = parse_bool(value);
        else if (key == "threads") cfg.threads = int(parse_double(value));
        else if (key == "precoders") {
          cfg.precoders.clear();
          for (const auto& name : split(value, ','))
            if (!name.empty()) cfg.precoders.push_back(precoder_from_name(name));
        } else throw std::invalid_argument("unknown key: " + key);
      } else if (section == "lrce") {
        if (key == "lambda") cfg.lrce.lambda = parse_double(value);
        else if (key == "step_size") cfg.lrce.step_size = parse_double(value);
        else if (key == "tolerance") cfg.lrce.tolerance = parse_double(value);
        else if (key == "sample_count") cfg.lrce.sample_count = int(parse_double(value));
        else if (key == "max_iterations") cfg.lrce.max_iterations = int(parse_double(value));
        else if (key == "fixed_selection") cfg.lrce.fixed_selection = parse_bool(value);
        else throw std::invalid_argument("unknown key in [lrce]: " + key);
      } else {
        if (key == "step_size") cfg.symbolwise.step_size = parse_double(value);
        else if (key == "tolerance") cfg.symbolwise.tolerance = parse_double(value);
        else if (key == "f_refinement_rounds") cfg.symbolwise.f_refinement_rounds = int(parse_double(value));
        else if (key == "sample_count") cfg.symbolwise.sample_count = int(parse_double(value));
        else if (key == "max_iterations") cfg.symbolwise.max_iterations = int(parse_double(value));
        else if (key == "multi_start") cfg.symbolwise.multi_start = parse_bool(value);
        else throw std::invalid_argument("unknown key in [symbolwise]: " + key);
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": invalid value for " + key);
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

namespace {

struct PointSample {
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_total = 0;
  double radiated = 0.0;
  double consumed = 0.0;
};

void validate(const ExperimentConfig& cfg) {
  if (cfg.antennas < 1 || cfg.users < 1 || cfg.block_length < 1 ||
      cfg.channel_realizations < 1)
    throw std::invalid_argument("experiment: dimensions must be positive");
  if (cfg.antennas < cfg.users)
    throw std::invalid_argument("experiment: need at least as many antennas as users");
  if (cfg.ptx_sweep.empty())
    throw std::invalid_argument("experiment: empty P_tx sweep");
  if (cfg.precoders.empty())
    throw std::invalid_argument("experiment: no precoders selected");
}

PointSample eval_realization(const ExperimentConfig& cfg,
                             const Constellation& constellation,
                             const NoiseModel& noise, double ptx,
                             std::size_t ptx_index, PrecoderKind kind, int r) {
  const int users = cfg.users;
  const int antennas = cfg.antennas;
  const int nb = cfg.block_length;
  const PaConfig pa{ptx, antennas};

  const CMat h = draw_channel(users, antennas, derive_seed(cfg.seed, 0x11, r));
  const auto symbols =
      draw_symbols(constellation, users, nb, derive_seed(cfg.seed, 0x22, r));
  const auto noise_vecs =
      draw_noise(noise, nb, derive_seed(cfg.seed, 0x33, r));
  const std::uint64_t fit_seed = derive_seed(cfg.seed, 0x44, r, ptx_index);

  CMat s(users, nb);
  for (int i = 0; i < nb; ++i) s.col(i) = symbols[i];

  CMat x_pa(antennas, nb);
  double f_design = 0.0;
  switch (kind) {
    case PrecoderKind::wf_ideal: {
      const LinearPrecoder wf = wiener_filter(h, noise, pa);
      x_pa = wf.matrix * s;  // amplifier bypassed
      f_design = wf.receive_gain;
      break;
    }
    case PrecoderKind::wf: {
      const LinearPrecoder wf = wiener_filter(h, noise, pa);
      x_pa = clip_block(wf.matrix * s, pa);
      f_design = wf.receive_gain;
      break;
    }
    case PrecoderKind::lrce: {
      auto [lp, trace] = fit_lrce(h, noise, pa, cfg.lrce, constellation, fit_seed);
      if (!trace.converged)
        std::fprintf(stderr,
                     "rcepc: lrce fit did not converge (realization %d, "
                     "P_tx %.3g); using best iterate\n",
                     r, ptx);
      x_pa = clip_block(lp.matrix * s, pa);
      f_design = lp.receive_gain;
      break;
    }
    case PrecoderKind::nl_ce:
    case PrecoderKind::nl_rce: {
      SymbolwiseSettings sw = cfg.symbolwise;
      sw.mode = kind == PrecoderKind::nl_ce ? SymbolwiseMode::constant_envelope
                                            : SymbolwiseMode::relaxed;
      const SymbolwiseSolver solver(h, noise, pa, sw);
      const GainCalibration cal = solver.calibrate_f(constellation, fit_seed);
      f_design = cal.degenerate ? solver.wiener().receive_gain : cal.receive_gain;
      int unconverged = 0;
      for (int i = 0; i < nb; ++i) {
        const SymbolwiseSolution sol = solver.solve(symbols[i], f_design);
        if (!sol.converged) ++unconverged;
        x_pa.col(i) = sol.transmit;
      }
      if (unconverged > 0)
        std::fprintf(stderr,
                     "rcepc: %d/%d symbol solves hit the iteration cap "
                     "(%s, realization %d, P_tx %.3g); best iterates used\n",
                     unconverged, nb, precoder_name(kind), r, ptx);
      break;
    }
  }

  CMat received(users, nb);
  for (int i = 0; i < nb; ++i)
    received.col(i) = h * x_pa.col(i) + noise_vecs[i];
  const CMat block = received.transpose();

  RVec gains(users);
  if (cfg.genie_gain) {
    gains.setConstant(f_design);
  } else {
    for (int m = 0; m < users; ++m)
      gains[m] = blind_gain(block, constellation, m);
  }
  const auto detected = detect(block, gains, constellation);
  const BerRecord rec = count_bit_errors(symbols, detected, constellation);

  PointSample out;
  out.bit_errors = rec.bit_errors;
  out.bits_total = rec.bits_total;
  out.radiated = radiated_power(x_pa);
  out.consumed = consumed_power(x_pa, pa);
  return out;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const Constellation constellation = build_constellation(cfg.constellation_order);
  const NoiseModel noise = NoiseModel::identity(cfg.users);

  struct Task {
    std::size_t ptx_index;
    std::size_t precoder_index;
    int realization;
  };
  std::vector<Task> tasks;
  for (std::size_t pi = 0; pi < cfg.ptx_sweep.size(); ++pi)
    for (std::size_t pk = 0; pk < cfg.precoders.size(); ++pk)
      for (int r = 0; r < cfg.channel_realizations; ++r)
        tasks.push_back({pi, pk, r});

  std::vector<PointSample> samples(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& t = tasks[idx];
      try {
        samples[idx] = eval_realization(cfg, constellation, noise,
                                        cfg.ptx_sweep[t.ptx_index], t.ptx_index,
                                        cfg.precoders[t.precoder_index],
                                        t.realization);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int n_threads = std::max(1, cfg.threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<ResultRow> rows;
  for (std::size_t pi = 0; pi < cfg.ptx_sweep.size(); ++pi) {
    for (std::size_t pk = 0; pk < cfg.precoders.size(); ++pk) {
      PointSample pooled;
      for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
        const Task& t = tasks[idx];
        if (t.ptx_index != pi || t.precoder_index != pk) continue;
        pooled.bit_errors += samples[idx].bit_errors;
        pooled.bits_total += samples[idx].bits_total;
        pooled.radiated += samples[idx].radiated;
        pooled.consumed += samples[idx].consumed;
      }
      ResultRow row;
      row.precoder = precoder_name(cfg.precoders[pk]);
      row.ptx = cfg.ptx_sweep[pi];
      row.radiated = pooled.radiated / cfg.channel_realizations;
      row.pa_power = pooled.consumed / cfg.channel_realizations;
      row.ber = pooled.bits_total
                    ? double(pooled.bit_errors) / double(pooled.bits_total)
                    : 0.0;
      row.realizations = cfg.channel_realizations;
      row.seed = cfg.seed;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string csv_string(const std::vector<ResultRow>& rows) {
  std::string out = "precoder,ptx,radiated,pa_power,ber,realizations,seed\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.9g,%.9g,%.9g,%.9g,%d,%llu\n",
                  r.precoder.c_str(), r.ptx, r.radiated, r.pa_power, r.ber,
                  r.realizations, static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << csv_string(rows);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ResultRow> parse_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      trim(line) != "precoder,ptx,radiated,pa_power,ber,realizations,seed")
    throw std::invalid_argument("csv: missing or malformed header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw std::invalid_argument("csv: malformed row: " + line);
    ResultRow r;
    r.precoder = f[0];
    r.ptx = parse_double(f[1]);
    r.radiated = parse_double(f[2]);
    r.pa_power = parse_double(f[3]);
    r.ber = parse_double(f[4]);
    r.realizations = int(parse_double(f[5]));
    r.seed = std::stoull(f[6]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ResultRow> parse_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open csv file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv_text(ss.str());
}

std::uint64_t config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace rcepc
