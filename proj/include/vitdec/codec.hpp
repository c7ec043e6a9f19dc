#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vitdec/trellis.hpp"

namespace vitdec {

using BitVec = std::vector<std::uint8_t>;

/// Periodic puncturing mask, B rows by `period` columns, applied
/// column-major in time. mask(row, col) == 1 keeps the bit.
struct PuncturePattern {
  int b = 0;
  int period = 0;
  std::vector<std::uint8_t> mask;  // column-major: mask[col * b + row]
  std::string name;

  std::uint8_t at(int row, int col) const { return mask[col * b + row]; }
  int kept_per_period() const;
  /// period input bits yield kept_per_period() coded bits.
  double rate() const { return static_cast<double>(period) / kept_per_period(); }
  bool is_identity() const { return kept_per_period() == b * period; }

  /// Named standard patterns for B=2: "r12" (identity), "r23", "r34".
  static PuncturePattern named(const std::string& name);
  /// Rows separated by ';', e.g. "110;101" for the rate-3/4 mask.
  static PuncturePattern parse(const std::string& rows);
  /// Throws std::invalid_argument if any column is all-zero or shape is bad.
  void validate() const;
};

/// Run the encoder FSM over `bits` starting from state 0, no tail bits.
/// Output has bits.size() * B entries, stage-major with the polys[0]
/// output first within each stage.
BitVec encode(const BitVec& bits, const Trellis& trellis);

/// Drop the coded bits at mask-0 positions; the mask repeats every
/// `period` stages and may end mid-period. coded.size() must be a
/// multiple of B.
BitVec puncture(const BitVec& coded, const PuncturePattern& pattern);

}  // namespace vitdec
