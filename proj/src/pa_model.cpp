#include "rcepc/pa_model.hpp"

#include <cmath>
#include <stdexcept>

namespace rcepc {

double PaConfig::sat_amplitude() const {
  if (total_available_power <= 0.0 || antennas < 1)
    throw std::invalid_argument("PaConfig: P_tx must be > 0 and N >= 1");
  return std::sqrt(total_available_power / antennas);
}

CVec clip(const CVec& x, const PaConfig& config) {
  if (x.size() != config.antennas)
    throw std::invalid_argument("clip: vector length must equal antenna count");
  const double a_sat = config.sat_amplitude();
  CVec out(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    const double mag = std::abs(x[n]);
    out[n] = mag <= a_sat ? x[n] : x[n] * (a_sat / mag);
  }
  return out;
}

CMat clip_block(const CMat& x, const PaConfig& config) {
  if (x.rows() != config.antennas)
    throw std::invalid_argument("clip_block: row count must equal antenna count");
  const double a_sat = config.sat_amplitude();
  CMat out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    for (Eigen::Index n = 0; n < x.rows(); ++n) {
      const double mag = std::abs(x(n, c));
      out(n, c) = mag <= a_sat ? x(n, c) : x(n, c) * (a_sat / mag);
    }
  return out;
}

double consumed_power(const CMat& pa_outputs, const PaConfig& config) {
  if (pa_outputs.cols() == 0)
    throw std::invalid_argument("consumed_power: empty block");
  if (pa_outputs.rows() != config.antennas)
    throw std::invalid_argument("consumed_power: row count mismatch");
  const double a_sat = config.sat_amplitude();
  double acc = 0.0;
  for (Eigen::Index c = 0; c < pa_outputs.cols(); ++c)
    for (Eigen::Index n = 0; n < pa_outputs.rows(); ++n)
      acc += std::abs(pa_outputs(n, c));
  return a_sat * acc / double(pa_outputs.cols());
}

double consumed_power(const std::vector<CVec>& pa_outputs,
                      const PaConfig& config) {
  if (pa_outputs.empty())
    throw std::invalid_argument("consumed_power: empty sequence");
  const double a_sat = config.sat_amplitude();
  double acc = 0.0;
  for (const auto& x : pa_outputs) {
    if (x.size() != config.antennas)
      throw std::invalid_argument("consumed_power: vector length mismatch");
    for (Eigen::Index n = 0; n < x.size(); ++n) acc += std::abs(x[n]);
  }
  return a_sat * acc / double(pa_outputs.size());
}

double radiated_power(const CMat& pa_outputs) {
  if (pa_outputs.cols() == 0)
    throw std::invalid_argument("radiated_power: empty block");
  return pa_outputs.squaredNorm() / double(pa_outputs.cols());
}

double radiated_power(const std::vector<CVec>& pa_outputs) {
  if (pa_outputs.empty())
    throw std::invalid_argument("radiated_power: empty sequence");
  double acc = 0.0;
  for (const auto& x : pa_outputs) acc += x.squaredNorm();
  return acc / double(pa_outputs.size());
}

}  // namespace rcepc
