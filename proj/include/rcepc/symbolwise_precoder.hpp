#ifndef RCEPC_SYMBOLWISE_PRECODER_HPP
#define RCEPC_SYMBOLWISE_PRECODER_HPP

#include <cstdint>

#include "rcepc/linear_precoder.hpp"
#include "rcepc/pa_model.hpp"
#include "rcepc/signal.hpp"
#include "rcepc/types.hpp"

namespace rcepc {

enum class SymbolwiseMode {
  relaxed,            // per-antenna magnitude <= sqrt(P_tx/N)
  constant_envelope,  // per-antenna magnitude == sqrt(P_tx/N)
};

struct SymbolwiseSettings {
  double step_size = 1e-2;
  double tolerance = 1e-6;        // relative iterate change threshold
  int f_refinement_rounds = 3;    // outer rounds of the gain calibration
  int sample_count = 256;         // symbol vectors per calibration round
  int max_iterations = 500;
  SymbolwiseMode mode = SymbolwiseMode::relaxed;
  // Relaxed mode additionally starts from the constant-envelope solution and
  // keeps the lower-objective result, which guarantees the relaxed objective
  // never exceeds the constant-envelope one at equal f.
  bool multi_start = true;
};

struct SymbolwiseSolution {
  CVec transmit;
  double objective = 0.0;
  int iterations_run = 0;
  double err_final = 0.0;
  bool converged = false;
};

struct GainCalibration {
  double receive_gain = 0.0;
  bool degenerate = false;  // all-zero transmit batch, gain forced to 0
};

// Per-symbol objective with the noise expectation in closed form:
// ||f H x - s||^2 + f^2 tr(C_eta).
double symbolwise_cost(const CVec& x, double receive_gain, const CVec& symbol,
                       const CMat& channel, const NoiseModel& noise);

// Gradient with respect to x: f^2 H^T H* x* - f H^T s*. The descent update
// applies its complex conjugate.
CVec symbolwise_gradient_x(const CVec& x, double receive_gain,
                           const CVec& symbol, const CMat& channel);

// Batched gain optimum for fixed transmit vectors:
// |sum_i Re{s_i^H H x_i}| / sum_i (||H x_i||^2 + tr C_eta).
double optimal_f_symbolwise(const std::vector<CVec>& transmits,
                            const std::vector<CVec>& symbols,
                            const CMat& channel, const NoiseModel& noise);

// Projected gradient solver for one channel realization. Precomputes the
// Wiener filter used for warm starts; solve() and calibrate_f() are const
// and safe to call concurrently.
class SymbolwiseSolver {
 public:
  SymbolwiseSolver(CMat channel, NoiseModel noise, PaConfig config,
                   SymbolwiseSettings settings);

  // Minimizes the per-symbol objective at fixed receive gain, projecting
  // onto the mode's feasible set every iteration.
  SymbolwiseSolution solve(const CVec& symbol, double receive_gain) const;

  // Alternates batched solves with the closed-form gain update, starting
  // from the Wiener-filter gain; a fresh symbol batch is drawn each round.
  GainCalibration calibrate_f(const Constellation& constellation,
                              std::uint64_t seed) const;

  const LinearPrecoder& wiener() const { return wiener_; }
  const SymbolwiseSettings& settings() const { return settings_; }

 private:
  SymbolwiseSolution descend(const CVec& start, const CVec& symbol,
                             double receive_gain, SymbolwiseMode mode) const;
  CVec project_ce(const CVec& x, const CVec& previous) const;

  CMat channel_;
  NoiseModel noise_;
  PaConfig config_;
  SymbolwiseSettings settings_;
  LinearPrecoder wiener_;
};

}  // namespace rcepc

#endif
