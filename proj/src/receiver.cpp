#include "rcepc/receiver.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace rcepc {

double blind_gain(const CMat& block, const Constellation& constellation,
                  int user) {
  if (block.rows() < 1)
    throw std::invalid_argument("blind_gain: empty block");
  if (user < 0 || user >= block.cols())
    throw std::invalid_argument("blind_gain: user index out of range");
  double denom = 0.0;
  for (Eigen::Index l = 0; l < block.rows(); ++l) {
    const Complex r = block(l, user);
    denom += std::abs(r.real()) + std::abs(r.imag());
  }
  if (denom == 0.0)
    throw std::invalid_argument("blind_gain: all-zero received column");
  return double(block.rows()) * constellation.mean_abs_re_im() / denom;
}

std::vector<CVec> detect(const CMat& block, const RVec& gains,
                         const Constellation& constellation) {
  if (gains.size() != block.cols())
    throw std::invalid_argument("detect: one gain per user required");
  for (Eigen::Index m = 0; m < gains.size(); ++m)
    if (!(gains[m] > 0.0) || !std::isfinite(gains[m]))
      throw std::invalid_argument("detect: gains must be positive and finite");
  std::vector<CVec> out;
  out.reserve(std::size_t(block.rows()));
  for (Eigen::Index l = 0; l < block.rows(); ++l) {
    CVec s(block.cols());
    for (Eigen::Index m = 0; m < block.cols(); ++m) {
      const Complex scaled = gains[m] * block(l, m);
      s[m] = constellation.points[constellation.nearest(scaled)];
    }
    out.push_back(std::move(s));
  }
  return out;
}

BerRecord count_bit_errors(const std::vector<CVec>& sent,
                           const std::vector<CVec>& detected,
                           const Constellation& constellation) {
  if (sent.size() != detected.size())
    throw std::invalid_argument("count_bit_errors: length mismatch");
  BerRecord rec;
  for (std::size_t i = 0; i < sent.size(); ++i) {
    if (sent[i].size() != detected[i].size())
      throw std::invalid_argument("count_bit_errors: vector length mismatch");
    for (Eigen::Index m = 0; m < sent[i].size(); ++m) {
      const std::uint32_t a =
          constellation.bit_labels[constellation.nearest(sent[i][m])];
      const std::uint32_t b =
          constellation.bit_labels[constellation.nearest(detected[i][m])];
      rec.bit_errors += std::uint64_t(std::popcount(a ^ b));
      rec.bits_total += std::uint64_t(constellation.bits_per_symbol);
    }
  }
  rec.ber = rec.bits_total ? double(rec.bit_errors) / double(rec.bits_total) : 0.0;
  return rec;
}

}  // namespace rcepc
