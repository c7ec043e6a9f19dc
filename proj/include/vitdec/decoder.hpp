#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "vitdec/channel.hpp"
#include "vitdec/codec.hpp"
#include "vitdec/trellis.hpp"

namespace vitdec {

enum class TracebackStart { kStoredMax, kRandom };

/// Tiling parameters for the framed decoder. Each frame emits f decoded
/// bits and additionally processes v1 warm-up stages on the left and v2
/// convergence stages on the right. f0 > 0 splits the frame's traceback
/// into independent subframes of f0 bits, each with its own v2-long right
/// overlap; f0 == 0 keeps one traceback per frame.
struct FrameConfig {
  int f = 0;
  int v1 = 0;
  int v2 = 0;
  int f0 = 0;
  TracebackStart start = TracebackStart::kStoredMax;
  std::uint64_t seed = 0;  // used only by kRandom

  /// Throws std::invalid_argument on bad values; when puncturing is
  /// active (period > 1), f, v1 and v2 must be multiples of the period.
  void validate(int pattern_period = 1) const;
};

struct DecodeStats {
  std::int64_t frames = 0;
  std::int64_t stages = 0;
  std::int64_t tracebacks = 0;
};

struct DecodeOutput {
  BitVec bits;
  DecodeStats stats;
};

/// Correlation of one branch output with the stage's soft values:
/// sum_b (-1)^bo[b] * llr_t[b]. bo is B-bit, transmit order MSB-first.
double branch_metric(std::uint32_t bo, const Eigen::Ref<const Eigen::ArrayXd>& llr_t);

/// The 2^(B-1) distinct branch metrics of one stage, indexed by bo in
/// [0, 2^(B-1)). The metric of any bo >= 2^(B-1) is the negation of its
/// bitwise complement's entry.
Eigen::ArrayXd stage_metrics(const Eigen::Ref<const Eigen::ArrayXd>& llr_t);

/// Expand one stage's metrics to all 2^B branch outputs into `table`.
void fill_stage_table(const Eigen::Ref<const Eigen::ArrayXd>& llr_t, double* table);

/// One add-compare-select step: for every state j, sigma_cur[j] is the
/// best of its two predecessors' sigma_prev plus the incoming branch
/// metric, and pi_col[j] the winning predecessor. Exact ties select the
/// second-listed predecessor.
void acs_stage(const Eigen::ArrayXd& sigma_prev, const double* stage_table,
               const Trellis& trellis, Eigen::ArrayXd& sigma_cur,
               std::uint16_t* pi_col);

/// Plain Viterbi over the whole block: forward pass with zero-initialized
/// path metrics, then one traceback from the best final state (ties to the
/// lowest state index). Reference for the framed variants.
DecodeOutput serial_decode(const LlrBlock& llr, const Trellis& trellis);

/// Re-insert 0.0 at the punctured positions, producing the full B x N
/// block. The stream must end on a stage boundary of the replicated mask.
LlrBlock depuncture(const Eigen::Ref<const Eigen::ArrayXd>& punctured,
                    const PuncturePattern& pattern);

/// Tiled decoder: ceil(N/f) independent frames, each running its own
/// forward pass over [m*f - v1, m*f + f + v2) clipped to the block, then
/// serial or subframe-parallel traceback per cfg. Output is bit-exact
/// regardless of worker count or scheduling order.
DecodeOutput framed_decode(const LlrBlock& llr, const Trellis& trellis,
                           const FrameConfig& cfg, int workers = 1);

}  // namespace vitdec
