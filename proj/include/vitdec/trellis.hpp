#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace vitdec {

/// Convolutional code definition: constraint length K, B outputs per input
/// bit, and B generator polynomials. Polynomials are K-bit values with the
/// tap on the newest register bit at the MSB, so octal 171 for K=7 reads
/// 1111001.
struct CodeSpec {
  int k = 0;
  int b = 0;
  std::vector<std::uint32_t> polys;

  /// Parse a comma-separated octal list, e.g. "171,133".
  static CodeSpec from_octal(int k, const std::string& octal_csv);

  int num_states() const { return 1 << (k - 1); }
  double base_rate() const { return 1.0 / b; }
  std::string polys_octal() const;
};

/// Fully precomputed encoder FSM. States encode the previous K-1 input
/// bits with the newest bit at the MSB; a transition is a right shift with
/// the input bit entering at the top. Immutable after construction.
class Trellis {
 public:
  explicit Trellis(const CodeSpec& spec);

  const CodeSpec& spec() const { return spec_; }
  int num_states() const { return num_states_; }
  int constraint_length() const { return spec_.k; }
  int outputs_per_bit() const { return spec_.b; }

  std::uint32_t next_state(std::uint32_t state, int input) const {
    return next_[state * 2 + input];
  }
  /// B-bit branch output, transmit order MSB-first (bit of polys[0] at the
  /// top). Branch taken from `state` on `input`.
  std::uint32_t branch_output(std::uint32_t state, int input) const {
    return out_[state * 2 + input];
  }
  /// The two predecessor states of `state`, in fixed (i', i'') order.
  std::pair<std::uint32_t, std::uint32_t> predecessors(std::uint32_t state) const {
    return {pred_[state * 2], pred_[state * 2 + 1]};
  }
  /// Branch output on the edge predecessors(state).first/.second -> state.
  std::uint32_t incoming_output(std::uint32_t state, int which) const {
    return in_out_[state * 2 + which];
  }
  /// Branch input of any edge into `state`: the bit that just entered the
  /// register, i.e. the MSB of the state.
  int branch_input(std::uint32_t state) const {
    return static_cast<int>(state >> (spec_.k - 2));
  }
  /// True when BO[i][0] and BO[i][1] are bitwise complements for every
  /// state, which holds whenever all polynomials tap the newest bit.
  bool complement_paired() const { return complement_paired_; }

  const std::uint32_t* incoming_output_data() const { return in_out_.data(); }

 private:
  CodeSpec spec_;
  int num_states_ = 0;
  std::vector<std::uint32_t> next_;    // [state][input]
  std::vector<std::uint32_t> out_;     // [state][input]
  std::vector<std::uint32_t> pred_;    // [state][which]
  std::vector<std::uint32_t> in_out_;  // [state][which]
  bool complement_paired_ = false;
};

/// Validate the spec and construct the FSM tables.
/// Throws std::invalid_argument on K < 2, B < 2, a zero polynomial, a
/// polynomial wider than K bits, or polys.size() != B.
Trellis build_trellis(const CodeSpec& spec);

}  // namespace vitdec
