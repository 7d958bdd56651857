#ifndef RCEPC_RECEIVER_HPP
#define RCEPC_RECEIVER_HPP

#include <cstdint>
#include <vector>

#include "rcepc/signal.hpp"
#include "rcepc/types.hpp"

namespace rcepc {

struct BerRecord {
  std::uint64_t bit_errors = 0;
  std::uint64_t bits_total = 0;
  double ber = 0.0;
};

// Blind per-user scaling factor from an L x M block of received samples:
// f_m = L * E[|Re s| + |Im s|] / sum_l (|Re r_m[l]| + |Im r_m[l]|),
// with the numerator expectation taken analytically over the constellation.
double blind_gain(const CMat& block, const Constellation& constellation,
                  int user);

// Scales each sample by its user's gain and maps it to the nearest
// constellation point. Ties break toward the smaller point index.
std::vector<CVec> detect(const CMat& block, const RVec& gains,
                         const Constellation& constellation);

// Bitwise Hamming distance between the Gray labels of sent and detected
// symbols, pooled over the block.
BerRecord count_bit_errors(const std::vector<CVec>& sent,
                           const std::vector<CVec>& detected,
                           const Constellation& constellation);

}  // namespace rcepc

#endif
