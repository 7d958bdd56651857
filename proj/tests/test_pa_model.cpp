#include <doctest.h>

#include <cmath>

#include "rcepc/pa_model.hpp"
#include "rcepc/rng.hpp"

using namespace rcepc;

namespace {

CVec random_vector(int n, double spread, Rng& rng) {
  CVec x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.complex_normal(spread);
  return x;
}

}  // namespace

TEST_CASE("clip passes the linear region and saturates with phase preserved") {
  const PaConfig pa{1.0, 1};
  CVec x(1);

  x[0] = Complex(0.3, 0.0);
  CHECK(clip(x, pa)[0] == Complex(0.3, 0.0));

  x[0] = 2.0 * std::polar(1.0, M_PI / 4.0);
  const Complex clipped = clip(x, pa)[0];
  CHECK(std::abs(clipped) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::arg(clipped) == doctest::Approx(M_PI / 4.0).epsilon(1e-12));

  // Boundary amplitude belongs to the linear branch.
  x[0] = Complex(1.0, 0.0);
  CHECK(clip(x, pa)[0] == Complex(1.0, 0.0));

  x[0] = Complex(0.0, 0.0);
  CHECK(clip(x, pa)[0] == Complex(0.0, 0.0));
}

TEST_CASE("clip is idempotent, feasible, and non-expansive") {
  const PaConfig pa{2.0, 8};
  const double a_sat = pa.sat_amplitude();
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const CVec x = random_vector(8, 4.0 * a_sat * a_sat, rng);
    const CVec y = random_vector(8, 4.0 * a_sat * a_sat, rng);
    const CVec cx = clip(x, pa);
    const CVec cy = clip(y, pa);
    CHECK((clip(cx, pa) - cx).norm() <= 1e-15 * cx.norm());
    for (int n = 0; n < 8; ++n)
      CHECK(std::abs(cx[n]) <= a_sat * (1.0 + 1e-15));
    CHECK((cx - cy).norm() <= (x - y).norm() + 1e-12);
  }
}

TEST_CASE("constant-envelope blocks radiate and consume exactly P_tx") {
  const PaConfig pa{3.0, 6};
  const double a_sat = pa.sat_amplitude();
  Rng rng(5);
  CMat block(6, 40);
  for (int c = 0; c < 40; ++c)
    for (int n = 0; n < 6; ++n)
      block(n, c) = std::polar(a_sat, 2.0 * M_PI * rng.uniform());
  CHECK(radiated_power(block) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(consumed_power(block, pa) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("power metrics on hand-computed blocks") {
  // Single PA output 0.5 with P_tx = 1, N = 1: a_sat * |x| = 0.5.
  const PaConfig one{1.0, 1};
  CMat single(1, 1);
  single(0, 0) = Complex(0.5, 0.0);
  CHECK(consumed_power(single, one) == doctest::Approx(0.5).epsilon(1e-12));

  // ||(0.5, 0.5j)||^2 = 0.5.
  CMat pair(2, 1);
  pair(0, 0) = Complex(0.5, 0.0);
  pair(1, 0) = Complex(0.0, 0.5);
  CHECK(radiated_power(pair) == doctest::Approx(0.5).epsilon(1e-12));

  const CMat zeros = CMat::Zero(4, 10);
  CHECK(radiated_power(zeros) == 0.0);
  CHECK(consumed_power(zeros, PaConfig{1.0, 4}) == 0.0);
}

TEST_CASE("empty blocks are rejected") {
  const CMat empty(4, 0);
  CHECK_THROWS_AS(radiated_power(empty), std::invalid_argument);
  CHECK_THROWS_AS(consumed_power(empty, PaConfig{1.0, 4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(consumed_power(std::vector<CVec>{}, PaConfig{1.0, 4}),
                  std::invalid_argument);
}

TEST_CASE("radiated <= consumed <= P_tx for clipped blocks") {
  const PaConfig pa{2.5, 10};
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    CMat block(10, 30);
    for (int c = 0; c < 30; ++c)
      block.col(c) = random_vector(10, 0.8, rng);
    const CMat pa_out = clip_block(block, pa);
    const double pr = radiated_power(pa_out);
    const double ppa = consumed_power(pa_out, pa);
    CHECK(pr <= ppa * (1.0 + 1e-12));
    CHECK(ppa <= pa.total_available_power * (1.0 + 1e-12));
  }
}
