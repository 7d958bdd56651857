#ifndef RCEPC_SIGNAL_HPP
#define RCEPC_SIGNAL_HPP

#include <cstdint>
#include <vector>

#include "rcepc/types.hpp"

namespace rcepc {

// Square B-QAM alphabet, normalized to unit average symbol energy, with Gray
// bit labels (independent Gray codes on the in-phase and quadrature levels).
struct Constellation {
  int order = 0;            // B, a perfect square
  int bits_per_symbol = 0;  // log2(B)
  std::vector<Complex> points;
  std::vector<std::uint32_t> bit_labels;  // Gray label of each point

  // Index of the nearest point (Euclidean); ties go to the smaller index.
  int nearest(Complex r) const;

  // E[|Re s| + |Im s|] over the alphabet, used by the blind gain estimator.
  double mean_abs_re_im() const;

  double min_distance() const;  // minimum pairwise distance
};

Constellation build_constellation(int order);

// Diagonal noise covariance; identity by default.
struct NoiseModel {
  RVec diagonal;  // length M, entries >= 0

  static NoiseModel identity(int users);
  static NoiseModel scaled_identity(int users, double variance);
  double trace() const { return diagonal.sum(); }
};

// `count` i.i.d. symbol vectors of length `users`, entries uniform over the
// constellation. A fixed seed reproduces the sequence bit-exactly.
std::vector<CVec> draw_symbols(const Constellation& c, int users, int count,
                               std::uint64_t seed);

// All B^M symbol vectors in lexicographic order. Rejects B^M > limit.
std::vector<CVec> enumerate_symbols(const Constellation& c, int users,
                                    std::size_t limit = 1u << 20);

// Stratified variant: count must be a multiple of B^M; the full input set is
// repeated count / B^M times.
std::vector<CVec> draw_symbols_stratified(const Constellation& c, int users,
                                          int count);

// M x N matrix of i.i.d. CN(0, 1) entries.
CMat draw_channel(int users, int antennas, std::uint64_t seed);

// `count` noise vectors with the model's diagonal covariance.
std::vector<CVec> draw_noise(const NoiseModel& model, int count,
                             std::uint64_t seed);

}  // namespace rcepc

#endif
