#include "rcepc/linear_precoder.hpp"

#include <cmath>
#include <stdexcept>

namespace rcepc {

namespace {

CMat samples_to_matrix(const std::vector<CVec>& samples, Eigen::Index users) {
  if (samples.empty())
    throw std::invalid_argument("lrce: sample set must be nonempty");
  CMat s(users, Eigen::Index(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].size() != users)
      throw std::invalid_argument("lrce: sample dimension mismatch");
    s.col(Eigen::Index(i)) = samples[i];
  }
  return s;
}

// Closed-form MSE over s and eta for unit-energy symbols (C_s = I):
// f^2 (||H P||_F^2 + tr C_eta) - 2 f Re tr(H P) + M.
double mse_part(const CMat& hp, double f, const NoiseModel& noise) {
  const double users = double(hp.rows());
  return f * f * (hp.squaredNorm() + noise.trace()) -
         2.0 * f * hp.trace().real() + users;
}

// Sample-mean peak penalty with live selection; x = P * S.
double penalty_part(const CMat& x, double sat_power) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    for (Eigen::Index n = 0; n < x.rows(); ++n) {
      const double excess = std::norm(x(n, i)) - sat_power;
      if (excess > 0.0) acc += excess;
    }
  return acc / double(x.cols());
}

// Stale-mask penalty for the fixed-selection variant: the subtraction is
// applied on the masked antennas regardless of the current power.
double penalty_part_fixed(const CMat& x, double sat_power,
                          const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>& mask) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    for (Eigen::Index n = 0; n < x.rows(); ++n)
      if (mask(n, i)) acc += std::norm(x(n, i)) - sat_power;
  return acc / double(x.cols());
}

struct CostParts {
  double cost;
  CMat hp;  // H * P, reused by the f update
};

CostParts cost_core(const CMat& p, double f, const CMat& s, const CMat& h,
                    const NoiseModel& noise, double sat_power, double lambda,
                    const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>* mask) {
  CMat hp = h * p;
  const CMat x = p * s;
  const double pen =
      mask ? penalty_part_fixed(x, sat_power, *mask) : penalty_part(x, sat_power);
  const double c = (1.0 - lambda) * mse_part(hp, f, noise) + lambda * pen;
  return {c, std::move(hp)};
}

// Gradient as stated: (1-l)(f^2 H^T H* P* - f H^T) + l E{Y P* s* s^T}.
CMat gradient_core(const CMat& p, double f, const CMat& s, const CMat& h,
                   double sat_power, double lambda,
                   const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>* mask) {
  const CMat hp = h * p;
  CMat grad = ((1.0 - lambda) * (f * f * (h.adjoint() * hp) - f * h.adjoint()))
                  .conjugate();
  const CMat x = p * s;
  const double w = lambda / double(s.cols());
  for (Eigen::Index i = 0; i < s.cols(); ++i) {
    for (Eigen::Index n = 0; n < x.rows(); ++n) {
      const bool active =
          mask ? (*mask)(n, i) : std::norm(x(n, i)) > sat_power;
      if (active)
        grad.row(n) += w * std::conj(x(n, i)) * s.col(i).transpose();
    }
  }
  return grad;
}

double optimal_f_core(const CMat& hp, const NoiseModel& noise) {
  const double den = hp.squaredNorm() + noise.trace();
  return std::abs(hp.trace().real()) / den;
}

}  // namespace

LinearPrecoder wiener_filter(const CMat& channel, const NoiseModel& noise,
                             const PaConfig& config) {
  if (channel.norm() == 0.0)
    throw std::invalid_argument("wiener_filter: zero channel");
  if (noise.trace() <= 0.0)
    throw std::invalid_argument("wiener_filter: noise trace must be positive");
  const Eigen::Index users = channel.rows();
  const double xi = noise.trace() / config.total_available_power;
  const CMat gram = channel * channel.adjoint() + xi * CMat::Identity(users, users);
  const CMat t = channel.adjoint() * gram.llt().solve(CMat::Identity(users, users));
  const double energy = t.squaredNorm();  // tr(T T^H), C_s = I
  const double beta = std::sqrt(config.total_available_power / energy);
  return {beta * t, 1.0 / beta};
}

double lrce_cost(const CMat& precoder, double receive_gain,
                 const std::vector<CVec>& samples, const CMat& channel,
                 const NoiseModel& noise, const PaConfig& config,
                 double lambda) {
  const CMat s = samples_to_matrix(samples, precoder.cols());
  return cost_core(precoder, receive_gain, s, channel, noise,
                   config.sat_power(), lambda, nullptr)
      .cost;
}

Eigen::VectorXi selection_matrix(const CMat& precoder, const CVec& symbol,
                                 const PaConfig& config) {
  const CVec x = precoder * symbol;
  const double sat_power = config.sat_power();
  Eigen::VectorXi sel(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n)
    sel[n] = std::norm(x[n]) > sat_power ? 1 : 0;
  return sel;
}

CMat lrce_gradient_P(const CMat& precoder, double receive_gain,
                     const std::vector<CVec>& samples, const CMat& channel,
                     const NoiseModel& noise, const PaConfig& config,
                     double lambda) {
  (void)noise;
  const CMat s = samples_to_matrix(samples, precoder.cols());
  return gradient_core(precoder, receive_gain, s, channel, config.sat_power(),
                       lambda, nullptr);
}

double optimal_f_linear(const CMat& precoder, const CMat& channel,
                        const NoiseModel& noise) {
  return optimal_f_core(channel * precoder, noise);
}

std::pair<LinearPrecoder, LrceTrace> fit_lrce_with_samples(
    const CMat& channel, const NoiseModel& noise, const PaConfig& config,
    const LrceSettings& settings, const std::vector<CVec>& samples) {
  if (settings.lambda <= 0.0 || settings.lambda >= 1.0)
    throw std::invalid_argument("fit_lrce: lambda must lie in (0, 1)");
  if (settings.step_size <= 0.0 || settings.tolerance <= 0.0)
    throw std::invalid_argument("fit_lrce: step size and tolerance must be positive");

  const CMat s = samples_to_matrix(samples, channel.rows());
  const double sat_power = config.sat_power();

  LinearPrecoder wf = wiener_filter(channel, noise, config);
  CMat p = wf.matrix;
  double f = wf.receive_gain;

  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask;
  const Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>* mask_ptr = nullptr;
  if (settings.fixed_selection) {
    const CMat x0 = p * s;
    mask = x0.array().abs2() > sat_power;
    mask_ptr = &mask;
  }

  LrceTrace trace;
  double cost = cost_core(p, f, s, channel, noise, sat_power, settings.lambda,
                          mask_ptr)
                    .cost;
  trace.cost_history.push_back(cost);

  double mu = settings.step_size;
  while (trace.iterations_run < settings.max_iterations) {
    const CMat grad = gradient_core(p, f, s, channel, sat_power,
                                    settings.lambda, mask_ptr);
    const CMat p_next = p - mu * grad.conjugate();
    const CMat hp_next = channel * p_next;
    const CMat x_next = p_next * s;
    const double pen_next =
        mask_ptr ? penalty_part_fixed(x_next, sat_power, *mask_ptr)
                 : penalty_part(x_next, sat_power);
    const double f_next = optimal_f_core(hp_next, noise);
    const double cost_next = (1.0 - settings.lambda) *
                                 mse_part(hp_next, f_next, noise) +
                             settings.lambda * pen_next;
    const double delta = std::abs(cost_next - cost) / std::abs(cost);
    if (cost_next > cost) {
      mu *= 0.5;
      ++trace.step_halvings;
      if (mu < 1e-16) break;  // step underflow, no further progress possible
      continue;
    }
    p = p_next;
    f = f_next;
    cost = cost_next;
    trace.cost_history.push_back(cost);
    ++trace.iterations_run;
    trace.relative_change = delta;
    if (delta <= settings.tolerance) {
      trace.converged = true;
      break;
    }
  }
  return {LinearPrecoder{std::move(p), f}, std::move(trace)};
}

std::pair<LinearPrecoder, LrceTrace> fit_lrce(const CMat& channel,
                                              const NoiseModel& noise,
                                              const PaConfig& config,
                                              const LrceSettings& settings,
                                              const Constellation& constellation,
                                              std::uint64_t seed) {
  const auto samples = draw_symbols(constellation, int(channel.rows()),
                                    settings.sample_count, seed);
  return fit_lrce_with_samples(channel, noise, config, settings, samples);
}

}  // namespace rcepc
