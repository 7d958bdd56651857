#include "rcepc/signal.hpp"

#include <cmath>
#include <stdexcept>

#include "rcepc/rng.hpp"

namespace rcepc {

namespace {

bool is_square_qam_order(int order) {
  if (order < 4) return false;
  const int side = static_cast<int>(std::lround(std::sqrt(double(order))));
  return side * side == order && (side & (side - 1)) == 0;
}

std::uint32_t gray(std::uint32_t i) { return i ^ (i >> 1); }

}  // namespace

Constellation build_constellation(int order) {
  if (order != 4 && order != 16 && order != 64)
    throw std::invalid_argument("constellation order must be one of 4, 16, 64");
  if (!is_square_qam_order(order))
    throw std::invalid_argument("constellation order must be a square QAM order");

  const int side = static_cast<int>(std::lround(std::sqrt(double(order))));
  int bits_side = 0;
  while ((1 << bits_side) < side) ++bits_side;

  // PAM levels {+-1, +-3, ...} scaled so the QAM alphabet has unit energy:
  // E|s|^2 = 2 (side^2 - 1) / 3 before scaling.
  const double scale = std::sqrt(3.0 / (2.0 * (double(side) * side - 1.0)));

  Constellation c;
  c.order = order;
  c.bits_per_symbol = 2 * bits_side;
  c.points.reserve(order);
  c.bit_labels.reserve(order);
  for (int i = 0; i < side; ++i) {
    const double re = (2 * i - (side - 1)) * scale;
    for (int q = 0; q < side; ++q) {
      const double im = (2 * q - (side - 1)) * scale;
      c.points.emplace_back(re, im);
      c.bit_labels.push_back((gray(std::uint32_t(i)) << bits_side) |
                             gray(std::uint32_t(q)));
    }
  }
  return c;
}

int Constellation::nearest(Complex r) const {
  int best = 0;
  double best_d = std::norm(r - points[0]);
  for (int k = 1; k < order; ++k) {
    const double d = std::norm(r - points[k]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

double Constellation::mean_abs_re_im() const {
  double acc = 0.0;
  for (const auto& p : points) acc += std::abs(p.real()) + std::abs(p.imag());
  return acc / double(order);
}

double Constellation::min_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      d = std::min(d, std::abs(points[a] - points[b]));
  return d;
}

NoiseModel NoiseModel::identity(int users) {
  return NoiseModel{RVec::Ones(users)};
}

NoiseModel NoiseModel::scaled_identity(int users, double variance) {
  return NoiseModel{RVec::Constant(users, variance)};
}

std::vector<CVec> draw_symbols(const Constellation& c, int users, int count,
                               std::uint64_t seed) {
  if (count < 1 || users < 1)
    throw std::invalid_argument("draw_symbols: count and users must be >= 1");
  Rng rng(seed);
  std::vector<CVec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    CVec s(users);
    for (int m = 0; m < users; ++m)
      s[m] = c.points[rng.index(c.points.size())];
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CVec> enumerate_symbols(const Constellation& c, int users,
                                    std::size_t limit) {
  std::size_t total = 1;
  for (int m = 0; m < users; ++m) {
    total *= std::size_t(c.order);
    if (total > limit)
      throw std::invalid_argument("enumerate_symbols: B^M exceeds limit");
  }
  std::vector<CVec> out;
  out.reserve(total);
  std::vector<int> idx(users, 0);
  for (std::size_t k = 0; k < total; ++k) {
    CVec s(users);
    for (int m = 0; m < users; ++m) s[m] = c.points[idx[m]];
    out.push_back(std::move(s));
    for (int m = users - 1; m >= 0; --m) {
      if (++idx[m] < c.order) break;
      idx[m] = 0;
    }
  }
  return out;
}

std::vector<CVec> draw_symbols_stratified(const Constellation& c, int users,
                                          int count) {
  const std::vector<CVec> all = enumerate_symbols(c, users);
  if (count < 1 || std::size_t(count) % all.size() != 0)
    throw std::invalid_argument(
        "draw_symbols_stratified: count must be a positive multiple of B^M");
  std::vector<CVec> out;
  out.reserve(count);
  const std::size_t reps = std::size_t(count) / all.size();
  for (std::size_t r = 0; r < reps; ++r)
    out.insert(out.end(), all.begin(), all.end());
  return out;
}

CMat draw_channel(int users, int antennas, std::uint64_t seed) {
  if (users < 1 || antennas < 1)
    throw std::invalid_argument("draw_channel: dimensions must be >= 1");
  Rng rng(seed);
  CMat h(users, antennas);
  for (int m = 0; m < users; ++m)
    for (int n = 0; n < antennas; ++n) h(m, n) = rng.complex_normal(1.0);
  return h;
}

std::vector<CVec> draw_noise(const NoiseModel& model, int count,
                             std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("draw_noise: count must be >= 1");
  Rng rng(seed);
  const int users = int(model.diagonal.size());
  std::vector<CVec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    CVec v(users);
    for (int m = 0; m < users; ++m) {
      const double var = model.diagonal[m];
      v[m] = var > 0.0 ? rng.complex_normal(var) : Complex(0.0, 0.0);
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace rcepc
