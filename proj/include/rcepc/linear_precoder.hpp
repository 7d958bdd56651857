#ifndef RCEPC_LINEAR_PRECODER_HPP
#define RCEPC_LINEAR_PRECODER_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "rcepc/pa_model.hpp"
#include "rcepc/signal.hpp"
#include "rcepc/types.hpp"

namespace rcepc {

// N x M precoding matrix paired with the common receive gain f.
struct LinearPrecoder {
  CMat matrix;
  double receive_gain = 0.0;
};

struct LrceSettings {
  double lambda = 0.1;      // peak-penalty weight, (0, 1)
  double step_size = 1e-2;  // initial mu
  double tolerance = 1e-5;  // relative cost change threshold
  int sample_count = 512;   // symbol vectors behind the stochastic penalty
  int max_iterations = 2000;
  // When true, the per-sample selection masks are computed once at the
  // initial precoder and held fixed, instead of being refreshed every
  // iteration (the default recomputes them, which keeps the penalty the
  // exact positive part of the cost).
  bool fixed_selection = false;
};

struct LrceTrace {
  std::vector<double> cost_history;  // accepted-step costs, non-increasing
  double relative_change = 0.0;
  int iterations_run = 0;
  int step_halvings = 0;
  bool converged = false;
};

// Transmit Wiener filter: P_WF = beta * H^H (H H^H + (tr C_eta / P_tx) I)^-1
// with beta chosen so tr(P_WF P_WF^H) = P_tx, and f_WF = 1 / beta.
LinearPrecoder wiener_filter(const CMat& channel, const NoiseModel& noise,
                             const PaConfig& config);

// Weighted sum of the closed-form MSE and the sample-mean peak-power
// penalty: (1-lambda) * MSE(P, f) + lambda * mean_i sum_n (|x_n|^2 - P_tx/N)_+
// with x = P s^(i). Unit-energy symbols, so C_s = I.
double lrce_cost(const CMat& precoder, double receive_gain,
                 const std::vector<CVec>& samples, const CMat& channel,
                 const NoiseModel& noise, const PaConfig& config,
                 double lambda);

// 0/1 diagonal of the per-antenna peak selection: entry n is 1 iff the
// instantaneous power |e_n^T P s|^2 exceeds P_tx/N.
Eigen::VectorXi selection_matrix(const CMat& precoder, const CVec& symbol,
                                 const PaConfig& config);

// Gradient of the cost with respect to P (the descent update uses its
// complex conjugate). Selection masks are evaluated at the given precoder.
CMat lrce_gradient_P(const CMat& precoder, double receive_gain,
                     const std::vector<CVec>& samples, const CMat& channel,
                     const NoiseModel& noise, const PaConfig& config,
                     double lambda);

// f minimizing the MSE part for fixed P:
// |tr(Re{H P})| / (tr(H P P^H H^H) + tr C_eta).
double optimal_f_linear(const CMat& precoder, const CMat& channel,
                        const NoiseModel& noise);

// Gradient descent on P with closed-form f updates, starting from the
// Wiener filter. Rejected steps halve the step size without advancing.
// Penalty samples are drawn from the constellation with the given seed.
std::pair<LinearPrecoder, LrceTrace> fit_lrce(const CMat& channel,
                                              const NoiseModel& noise,
                                              const PaConfig& config,
                                              const LrceSettings& settings,
                                              const Constellation& constellation,
                                              std::uint64_t seed);

// Same, with an explicit penalty sample set (e.g. the exhaustive input set).
std::pair<LinearPrecoder, LrceTrace> fit_lrce_with_samples(
    const CMat& channel, const NoiseModel& noise, const PaConfig& config,
    const LrceSettings& settings, const std::vector<CVec>& samples);

}  // namespace rcepc

#endif
