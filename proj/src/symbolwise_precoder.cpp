#include "rcepc/symbolwise_precoder.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "rcepc/rng.hpp"

namespace rcepc {

double symbolwise_cost(const CVec& x, double receive_gain, const CVec& symbol,
                       const CMat& channel, const NoiseModel& noise) {
  const CVec residual = receive_gain * (channel * x) - symbol;
  return residual.squaredNorm() + receive_gain * receive_gain * noise.trace();
}

CVec symbolwise_gradient_x(const CVec& x, double receive_gain,
                           const CVec& symbol, const CMat& channel) {
  const double f = receive_gain;
  return (f * channel.adjoint() * (f * (channel * x) - symbol)).conjugate();
}

double optimal_f_symbolwise(const std::vector<CVec>& transmits,
                            const std::vector<CVec>& symbols,
                            const CMat& channel, const NoiseModel& noise) {
  if (transmits.empty() || transmits.size() != symbols.size())
    throw std::invalid_argument(
        "optimal_f_symbolwise: batches must be nonempty and equal length");
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t i = 0; i < transmits.size(); ++i) {
    const CVec hx = channel * transmits[i];
    numerator += (symbols[i].adjoint() * hx).value().real();
    denominator += hx.squaredNorm() + noise.trace();
  }
  if (numerator == 0.0) return 0.0;
  return std::abs(numerator) / denominator;
}

SymbolwiseSolver::SymbolwiseSolver(CMat channel, NoiseModel noise,
                                   PaConfig config, SymbolwiseSettings settings)
    : channel_(std::move(channel)),
      noise_(std::move(noise)),
      config_(config),
      settings_(settings),
      wiener_(wiener_filter(channel_, noise_, config_)) {
  if (settings_.step_size <= 0.0 || settings_.tolerance <= 0.0)
    throw std::invalid_argument(
        "SymbolwiseSolver: step size and tolerance must be positive");
  if (settings_.f_refinement_rounds < 1 || settings_.sample_count < 1)
    throw std::invalid_argument(
        "SymbolwiseSolver: refinement rounds and sample count must be >= 1");
}

CVec SymbolwiseSolver::project_ce(const CVec& x, const CVec& previous) const {
  const double a_sat = config_.sat_amplitude();
  CVec out(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    const double mag = std::abs(x[n]);
    if (mag > 0.0) {
      out[n] = x[n] * (a_sat / mag);
    } else {
      // Zero entry has no phase; keep the previous iterate's, or 0.
      const double pmag = std::abs(previous[n]);
      out[n] = pmag > 0.0 ? previous[n] * (a_sat / pmag) : Complex(a_sat, 0.0);
    }
  }
  return out;
}

SymbolwiseSolution SymbolwiseSolver::descend(const CVec& start,
                                             const CVec& symbol,
                                             double receive_gain,
                                             SymbolwiseMode mode) const {
  const double f = receive_gain;
  const double noise_term = f * f * noise_.trace();
  CVec x = mode == SymbolwiseMode::relaxed ? clip(start, config_)
                                           : project_ce(start, start);
  CVec y = channel_ * x;
  double phi = (f * y - symbol).squaredNorm() + noise_term;

  SymbolwiseSolution sol;
  double mu = settings_.step_size;
  while (sol.iterations_run < settings_.max_iterations) {
    const CVec gstar = f * (channel_.adjoint() * (f * y - symbol));
    const CVec cand = x - mu * gstar;
    const CVec x_next = mode == SymbolwiseMode::relaxed
                            ? clip(cand, config_)
                            : project_ce(cand, x);
    const double base = x.norm();
    const double err =
        (x_next - x).norm() / (base > 0.0 ? base : 1.0);
    const CVec y_next = channel_ * x_next;
    const double phi_next = (f * y_next - symbol).squaredNorm() + noise_term;
    if (phi_next > phi) {
      mu *= 0.5;
      if (mu < 1e-18) break;
      continue;
    }
    x = x_next;
    y = y_next;
    phi = phi_next;
    ++sol.iterations_run;
    sol.err_final = err;
    if (err <= settings_.tolerance) {
      sol.converged = true;
      break;
    }
  }
  sol.transmit = std::move(x);
  sol.objective = phi;
  return sol;
}

SymbolwiseSolution SymbolwiseSolver::solve(const CVec& symbol,
                                           double receive_gain) const {
  if (receive_gain <= 0.0)
    throw std::invalid_argument("solve: receive gain must be positive");
  const CVec start = clip(wiener_.matrix * symbol, config_);
  if (settings_.mode == SymbolwiseMode::constant_envelope)
    return descend(start, symbol, receive_gain, SymbolwiseMode::constant_envelope);

  SymbolwiseSolution best =
      descend(start, symbol, receive_gain, SymbolwiseMode::relaxed);
  if (settings_.multi_start) {
    const SymbolwiseSolution ce = descend(start, symbol, receive_gain,
                                          SymbolwiseMode::constant_envelope);
    SymbolwiseSolution from_ce =
        descend(ce.transmit, symbol, receive_gain, SymbolwiseMode::relaxed);
    if (from_ce.objective < best.objective) best = std::move(from_ce);
  }
  return best;
}

GainCalibration SymbolwiseSolver::calibrate_f(const Constellation& constellation,
                                              std::uint64_t seed) const {
  const int users = int(channel_.rows());
  double f = wiener_.receive_gain;
  for (int round = 0; round < settings_.f_refinement_rounds; ++round) {
    const auto batch = draw_symbols(constellation, users,
                                    settings_.sample_count,
                                    derive_seed(seed, 0xca1u, std::uint64_t(round)));
    std::vector<CVec> transmits;
    transmits.reserve(batch.size());
    for (const auto& s : batch) transmits.push_back(solve(s, f).transmit);
    const double f_next = optimal_f_symbolwise(transmits, batch, channel_, noise_);
    if (f_next == 0.0) return {0.0, true};
    f = f_next;
  }
  return {f, false};
}

}  // namespace rcepc
