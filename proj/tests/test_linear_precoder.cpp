#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rcepc/linear_precoder.hpp"
#include "rcepc/rng.hpp"

using namespace rcepc;

namespace {

CMat random_channel_like(int users, int antennas, std::uint64_t seed) {
  return draw_channel(users, antennas, seed);
}

// Random small instance kept away from the penalty kinks so the cost is
// smooth at the test point.
struct SmoothInstance {
  CMat channel;
  CMat precoder;
  double gain;
  std::vector<CVec> samples;
};

SmoothInstance smooth_instance(std::uint64_t seed, const PaConfig& pa,
                               int users = 2, int antennas = 4,
                               int sample_count = 32) {
  const auto c = build_constellation(16);
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t s = derive_seed(seed, 0xabc, attempt);
    SmoothInstance inst;
    inst.channel = draw_channel(users, antennas, derive_seed(s, 1));
    inst.samples = draw_symbols(c, users, sample_count, derive_seed(s, 2));
    Rng rng(derive_seed(s, 3));
    inst.precoder = CMat(antennas, users);
    for (int n = 0; n < antennas; ++n)
      for (int m = 0; m < users; ++m)
        inst.precoder(n, m) = rng.complex_normal(pa.sat_power());
    inst.gain = 0.2 + rng.uniform();
    // Reject instances with an antenna power within 1e-3 of the threshold.
    double margin = 1e300;
    for (const auto& sym : inst.samples) {
      const CVec x = inst.precoder * sym;
      for (int n = 0; n < antennas; ++n)
        margin = std::min(margin, std::abs(std::norm(x[n]) - pa.sat_power()));
    }
    if (margin > 1e-3) return inst;
  }
}

}  // namespace

TEST_CASE("Wiener filter closed form in the scalar case") {
  CMat h(1, 1);
  h(0, 0) = Complex(1.0, 0.0);
  const auto wf = wiener_filter(h, NoiseModel::identity(1), PaConfig{1.0, 1});
  CHECK(std::abs(wf.matrix(0, 0) - Complex(1.0, 0.0)) < 1e-12);
  CHECK(wf.receive_gain == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Wiener filter meets the transmit power budget for any channel scale") {
  const PaConfig pa{2.0, 8};
  for (double scale : {0.1, 1.0, 10.0}) {
    const CMat h = scale * random_channel_like(3, 8, 21);
    const auto wf = wiener_filter(h, NoiseModel::identity(3), pa);
    CHECK(wf.matrix.squaredNorm() ==
          doctest::Approx(pa.total_available_power).epsilon(1e-10));
    CHECK(wf.receive_gain > 0.0);
  }
  CHECK_THROWS_AS(
      wiener_filter(CMat::Zero(2, 4), NoiseModel::identity(2), pa),
      std::invalid_argument);
}

TEST_CASE("cost degenerate points") {
  const PaConfig pa{1.0, 4};
  const auto c = build_constellation(16);
  const CMat h = random_channel_like(2, 4, 31);
  const auto samples = draw_symbols(c, 2, 16, 5);

  CMat p = CMat::Random(4, 2);
  CHECK(lrce_cost(p, 0.0, samples, h, NoiseModel::identity(2), pa, 0.0) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lrce_cost(CMat::Zero(4, 2), 0.0, samples, h, NoiseModel::identity(2),
                  pa, 0.3) == doctest::Approx(0.7 * 2.0).epsilon(1e-12));
  // Penalty-only cost vanishes when no antenna ever violates.
  const CMat tiny = 1e-3 * CMat::Ones(4, 2);
  CHECK(lrce_cost(tiny, 0.0, samples, h, NoiseModel::identity(2), pa, 1.0) ==
        0.0);
}

TEST_CASE("selection matrix marks exactly the violating antennas") {
  const PaConfig pa{2.0, 2};  // sat power 1
  CMat p = CMat::Zero(2, 1);
  CVec s(1);
  s[0] = Complex(1.0, 0.0);

  p(0, 0) = Complex(0.5, 0.0);
  p(1, 0) = Complex(0.5, 0.0);
  CHECK(selection_matrix(p, s, pa).sum() == 0);

  p(0, 0) = Complex(3.0, 0.0);
  p(1, 0) = Complex(3.0, 0.0);
  CHECK(selection_matrix(p, s, pa).sum() == 2);

  p(0, 0) = Complex(3.0, 0.0);
  p(1, 0) = Complex(0.5, 0.0);
  const auto sel = selection_matrix(p, s, pa);
  CHECK(sel[0] == 1);
  CHECK(sel[1] == 0);
}

TEST_CASE("gradient vanishes when both terms carry a factor f") {
  const PaConfig pa{100.0, 4};  // generous budget: penalty inactive
  const auto c = build_constellation(16);
  const CMat h = random_channel_like(2, 4, 41);
  const auto samples = draw_symbols(c, 2, 16, 6);
  const CMat p = 0.1 * CMat::Ones(4, 2);
  const CMat g =
      lrce_gradient_P(p, 0.0, samples, h, NoiseModel::identity(2), pa, 0.0);
  CHECK(g.norm() == 0.0);
}

TEST_CASE("gradient matches central finite differences away from kinks") {
  const PaConfig pa{1.0, 4};
  const NoiseModel noise = NoiseModel::identity(2);
  const double lambda = 0.35;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = smooth_instance(seed, pa);
    const CMat analytic = lrce_gradient_P(inst.precoder, inst.gain,
                                          inst.samples, inst.channel, noise,
                                          pa, lambda);
    const CMat numeric = oracles::fd_gradient(
        [&](const CMat& p) {
          return lrce_cost(p, inst.gain, inst.samples, inst.channel, noise, pa,
                           lambda);
        },
        inst.precoder, 1e-6);
    CHECK((numeric - analytic).norm() / analytic.norm() < 1e-5);
  }
}

TEST_CASE("non-violating precoder reduces the gradient to the MSE term") {
  const PaConfig pa{1.0, 4};
  const NoiseModel noise = NoiseModel::identity(2);
  const auto c = build_constellation(16);
  const CMat h = random_channel_like(2, 4, 77);
  const auto samples = draw_symbols(c, 2, 32, 9);
  const CMat p = 1e-2 * random_channel_like(2, 4, 78).transpose();
  const double lambda = 0.4;
  const CMat with_penalty =
      lrce_gradient_P(p, 0.7, samples, h, noise, pa, lambda);
  const CMat mse_only =
      (1.0 - lambda) / 1.0 *
      lrce_gradient_P(p, 0.7, samples, h, noise, pa, 0.0);
  CHECK((with_penalty - mse_only).norm() < 1e-14);
}

TEST_CASE("closed-form receive gain") {
  const NoiseModel noise = NoiseModel::identity(1);
  CMat h(1, 1), p(1, 1);
  h(0, 0) = Complex(1.0, 0.0);

  p(0, 0) = Complex(0.0, 0.0);
  CHECK(optimal_f_linear(p, h, noise) == 0.0);

  p(0, 0) = Complex(1.0, 0.0);
  CHECK(optimal_f_linear(p, h, noise) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("closed-form gain agrees with a 1-D scan of the MSE objective") {
  const NoiseModel noise = NoiseModel::identity(2);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const CMat h = random_channel_like(2, 6, 500 + seed);
    CMat p = 0.5 * random_channel_like(2, 6, 600 + seed).transpose();
    // Align so tr(HP) is positive real; otherwise the minimizer over
    // f >= 0 sits at the boundary rather than the stationary point.
    const Complex tr = (h * p).trace();
    p *= std::conj(tr) / std::abs(tr);
    const double f_closed = optimal_f_linear(p, h, noise);
    const CMat hp = h * p;
    auto objective = [&](double f) {
      return f * f * (hp.squaredNorm() + noise.trace()) -
             2.0 * f * hp.trace().real() + 2.0;
    };
    const double f_scan =
        oracles::scan_min(objective, 2.0 * f_closed + 0.1, 1e-4);
    CHECK(std::abs(f_closed - f_scan) <= 1e-4);
  }
}

TEST_CASE("scaled precoder gain follows c / (c^2 a + b)") {
  const NoiseModel noise = NoiseModel::identity(2);
  const CMat h = random_channel_like(2, 6, 91);
  CMat p = 0.5 * random_channel_like(2, 6, 92).transpose();
  // Rotate so tr(HP) is positive real; the scaling law assumes that.
  const Complex tr = (h * p).trace();
  p *= std::conj(tr) / std::abs(tr);
  const double a = (h * p).squaredNorm();
  const double b = noise.trace();
  const double base_num = (h * p).trace().real();
  for (double c : {0.5, 1.0, 3.0}) {
    const double expected = c * base_num / (c * c * a + b);
    CHECK(optimal_f_linear(c * p, h, noise) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("fit rejects the degenerate unpenalized problem") {
  const CMat h = random_channel_like(2, 8, 13);
  LrceSettings settings;
  settings.lambda = 0.0;
  CHECK_THROWS_AS(fit_lrce(h, NoiseModel::identity(2), PaConfig{1.0, 8},
                           settings, build_constellation(16), 1),
                  std::invalid_argument);
}

TEST_CASE("fit trace is monotone and converges") {
  const CMat h = random_channel_like(2, 8, 14);
  LrceSettings settings;
  settings.lambda = 0.1;
  const auto [precoder, trace] =
      fit_lrce(h, NoiseModel::identity(2), PaConfig{1.0, 8}, settings,
               build_constellation(16), 2);
  REQUIRE(trace.cost_history.size() >= 2);
  for (std::size_t i = 1; i < trace.cost_history.size(); ++i)
    CHECK(trace.cost_history[i] <= trace.cost_history[i - 1]);
  CHECK(trace.converged);
  CHECK(trace.relative_change <= settings.tolerance);
  CHECK(precoder.receive_gain > 0.0);
}

TEST_CASE("with a huge budget the fit settles in the penalty-free region") {
  // With an enormous budget the pure-MSE part has no finite minimizer (the
  // infimum sits at ||P|| -> inf, f -> 0), so we do not demand an exact
  // stationary point; we demand that the fit leaves the penalized region
  // entirely and drives cost and gradient far below their starting values.
  const CMat h = random_channel_like(2, 4, 15);
  const NoiseModel noise = NoiseModel::identity(2);
  const PaConfig pa{1e6, 4};
  LrceSettings settings;
  settings.lambda = 0.5;
  settings.tolerance = 1e-14;
  settings.max_iterations = 50000;
  const auto c = build_constellation(16);
  const auto samples = draw_symbols(c, 2, 64, 3);
  const auto wf = wiener_filter(h, noise, pa);
  const double cost0 = lrce_cost(wf.matrix, wf.receive_gain, samples, h, noise,
                                 pa, settings.lambda);
  const double grad0 = lrce_gradient_P(wf.matrix, wf.receive_gain, samples, h,
                                       noise, pa, settings.lambda)
                           .norm();
  const auto [precoder, trace] =
      fit_lrce_with_samples(h, noise, pa, settings, samples);
  // Penalty contributes nothing at the solution: the penalized cost equals
  // the scaled unpenalized one.
  CHECK(lrce_cost(precoder.matrix, precoder.receive_gain, samples, h, noise,
                  pa, settings.lambda) ==
        doctest::Approx((1.0 - settings.lambda) *
                        lrce_cost(precoder.matrix, precoder.receive_gain,
                                  samples, h, noise, pa, 0.0))
            .epsilon(1e-12));
  CHECK(lrce_cost(precoder.matrix, precoder.receive_gain, samples, h, noise,
                  pa, settings.lambda) < 1e-3 * cost0);
  const CMat grad = lrce_gradient_P(precoder.matrix, precoder.receive_gain,
                                    samples, h, noise, pa, settings.lambda);
  CHECK(grad.norm() < 1e-4 * grad0);
}

TEST_CASE("exhaustive sample set reproduces the exact expectation over S") {
  const auto c = build_constellation(16);
  const CMat h = random_channel_like(2, 4, 16);
  const NoiseModel noise = NoiseModel::identity(2);
  const PaConfig pa{1.0, 4};
  const CMat p = 0.6 * random_channel_like(2, 4, 17).transpose();
  const auto all = enumerate_symbols(c, 2);
  REQUIRE(all.size() == 256);

  // Independent oracle: direct average of the positive part over all of S.
  double exact = 0.0;
  for (const auto& s : all) {
    const CVec x = p * s;
    for (int n = 0; n < 4; ++n)
      exact += std::max(std::norm(x[n]) - pa.sat_power(), 0.0);
  }
  exact /= double(all.size());

  const double lambda = 0.25;
  const double mse = lrce_cost(p, 0.4, all, h, noise, pa, 0.0);
  CHECK(lrce_cost(p, 0.4, all, h, noise, pa, lambda) ==
        doctest::Approx((1.0 - lambda) * mse + lambda * exact).epsilon(1e-12));
}
