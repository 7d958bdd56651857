#ifndef RCEPC_PA_MODEL_HPP
#define RCEPC_PA_MODEL_HPP

#include <vector>

#include "rcepc/types.hpp"

namespace rcepc {

// Per-antenna amplifier budget: total available power split equally over the
// antennas, giving saturation amplitude sqrt(P_tx / N).
struct PaConfig {
  double total_available_power = 1.0;  // P_tx, linear watts
  int antennas = 1;                    // N

  double sat_amplitude() const;
  double sat_power() const { return total_available_power / antennas; }
};

// Ideal AM-AM limiter: entries inside the disk of radius sqrt(P_tx/N) pass
// unchanged, larger entries are scaled to the saturation amplitude with
// phase preserved. clip(0) = 0 (the saturating branch needs |x| > a_sat > 0).
CVec clip(const CVec& x, const PaConfig& config);

// Column-wise clip of an N x L block.
CMat clip_block(const CMat& x, const PaConfig& config);

// Amplifier power draw: sum over antennas of a_sat * mean |x_PA,n| across the
// block. Columns are the transmitted vectors.
double consumed_power(const CMat& pa_outputs, const PaConfig& config);
double consumed_power(const std::vector<CVec>& pa_outputs,
                      const PaConfig& config);

// Mean transmitted RF power, the sample mean of ||x_PA||^2 over the block.
double radiated_power(const CMat& pa_outputs);
double radiated_power(const std::vector<CVec>& pa_outputs);

}  // namespace rcepc

#endif
