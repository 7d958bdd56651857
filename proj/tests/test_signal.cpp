#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "rcepc/rng.hpp"
#include "rcepc/signal.hpp"

using namespace rcepc;

namespace {

int popcount32(std::uint32_t v) {
  int c = 0;
  for (; v; v >>= 1) c += int(v & 1);
  return c;
}

}  // namespace

TEST_CASE("QPSK points are (+-1 +- j)/sqrt(2) with unit energy") {
  const auto c = build_constellation(4);
  REQUIRE(c.points.size() == 4);
  const double v = 1.0 / std::sqrt(2.0);
  for (const auto& p : c.points) {
    CHECK(std::abs(std::abs(p.real()) - v) < 1e-15);
    CHECK(std::abs(std::abs(p.imag()) - v) < 1e-15);
  }
}

TEST_CASE("16QAM levels are {+-1, +-3}/sqrt(10)") {
  const auto c = build_constellation(16);
  std::set<long long> levels;
  for (const auto& p : c.points)
    levels.insert(std::llround(p.real() * std::sqrt(10.0)));
  CHECK(levels == std::set<long long>{-3, -1, 1, 3});
}

TEST_CASE("every supported order has exactly unit mean energy") {
  for (int order : {4, 16, 64}) {
    const auto c = build_constellation(order);
    double acc = 0.0;
    for (const auto& p : c.points) acc += std::norm(p);
    CHECK(std::abs(acc / order - 1.0) < 1e-12);
  }
}

TEST_CASE("unsupported orders are rejected") {
  CHECK_THROWS_AS(build_constellation(5), std::invalid_argument);
  CHECK_THROWS_AS(build_constellation(8), std::invalid_argument);
  CHECK_THROWS_AS(build_constellation(32), std::invalid_argument);
  CHECK_THROWS_AS(build_constellation(2), std::invalid_argument);
}

TEST_CASE("bit labels form a Gray code over the grid") {
  for (int order : {4, 16, 64}) {
    const auto c = build_constellation(order);
    // Grid-adjacent pairs: nearest spacing along one axis, aligned on the
    // other. Exhaustive scan over all pairs.
    const double spacing = c.min_distance();
    for (int a = 0; a < order; ++a) {
      for (int b = a + 1; b < order; ++b) {
        const Complex d = c.points[a] - c.points[b];
        const bool adjacent =
            (std::abs(std::abs(d.real()) - spacing) < 1e-12 &&
             std::abs(d.imag()) < 1e-12) ||
            (std::abs(std::abs(d.imag()) - spacing) < 1e-12 &&
             std::abs(d.real()) < 1e-12);
        if (adjacent)
          CHECK(popcount32(c.bit_labels[a] ^ c.bit_labels[b]) == 1);
      }
    }
  }
}

TEST_CASE("draw_symbols is deterministic and stays on the alphabet") {
  const auto c = build_constellation(16);
  const auto a = draw_symbols(c, 10, 100, 7);
  const auto b = draw_symbols(c, 10, 100, 7);
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK((a[i] - b[i]).norm() == 0.0);
  for (const auto& s : a)
    for (Eigen::Index m = 0; m < s.size(); ++m)
      CHECK(std::find(c.points.begin(), c.points.end(), s[m]) != c.points.end());
}

TEST_CASE("drawn symbols are empirically zero mean") {
  const auto c = build_constellation(16);
  const auto seq = draw_symbols(c, 10, 2000, 7);
  CVec mean = CVec::Zero(10);
  for (const auto& s : seq) mean += s;
  mean /= double(seq.size());
  for (Eigen::Index m = 0; m < 10; ++m) CHECK(std::abs(mean[m]) < 0.1);
}

TEST_CASE("stratified drawing covers the full input set uniformly") {
  const auto c = build_constellation(16);
  const auto seq = draw_symbols_stratified(c, 2, 512);
  REQUIRE(seq.size() == 512);
  std::map<std::pair<int, int>, int> counts;
  for (const auto& s : seq)
    counts[{c.nearest(s[0]), c.nearest(s[1])}]++;
  CHECK(counts.size() == 256);
  for (const auto& [key, n] : counts) CHECK(n == 2);
  CHECK_THROWS_AS(draw_symbols_stratified(c, 2, 300), std::invalid_argument);
}

TEST_CASE("channel entries have unit variance and are reproducible") {
  double acc = 0.0;
  int count = 0;
  for (int d = 0; d < 10; ++d) {
    const CMat h = draw_channel(10, 100, 100 + d);
    acc += h.squaredNorm();
    count += int(h.size());
  }
  CHECK(std::abs(acc / count - 1.0) < 0.05);

  CHECK((draw_channel(3, 5, 42) - draw_channel(3, 5, 42)).norm() == 0.0);
  const CMat scalar = draw_channel(1, 1, 9);
  CHECK(scalar.rows() == 1);
  CHECK(scalar.cols() == 1);
}

TEST_CASE("noise matches its configured covariance") {
  const auto model = NoiseModel::identity(4);
  const auto seq = draw_noise(model, 4000, 3);
  CMat cov = CMat::Zero(4, 4);
  for (const auto& v : seq) cov += v * v.adjoint();
  cov /= double(seq.size());
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double expected = a == b ? 1.0 : 0.0;
      CHECK(std::abs(cov(a, b) - Complex(expected, 0.0)) < 0.1);
    }

  const auto zero = draw_noise(NoiseModel::scaled_identity(4, 0.0), 10, 3);
  for (const auto& v : zero) CHECK(v.norm() == 0.0);

  const auto n1 = draw_noise(model, 5, 11);
  const auto n2 = draw_noise(model, 5, 11);
  for (std::size_t i = 0; i < n1.size(); ++i)
    CHECK((n1[i] - n2[i]).norm() == 0.0);
}
