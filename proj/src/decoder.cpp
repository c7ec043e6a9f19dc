#include "vitdec/decoder.hpp"

#include <algorithm>
#include <stdexcept>

#include "vitdec/parallel.hpp"

namespace vitdec {

void FrameConfig::validate(int pattern_period) const {
  if (f < 1) throw std::invalid_argument("frame size f must be >= 1");
  if (v1 < 0 || v2 < 0) throw std::invalid_argument("overlaps must be >= 0");
  if (f0 < 0 || f0 > f) throw std::invalid_argument("f0 must be in [0, f]");
  if (pattern_period > 1) {
    if (f % pattern_period || v1 % pattern_period || v2 % pattern_period) {
      throw std::invalid_argument(
          "f, v1 and v2 must be multiples of the puncture period");
    }
  }
}

double branch_metric(std::uint32_t bo, const Eigen::Ref<const Eigen::ArrayXd>& llr_t) {
  const int b = static_cast<int>(llr_t.size());
  double m = 0.0;
  for (int i = 0; i < b; ++i) {
    const int bit = (bo >> (b - 1 - i)) & 1;
    m += bit ? -llr_t[i] : llr_t[i];
  }
  return m;
}

Eigen::ArrayXd stage_metrics(const Eigen::Ref<const Eigen::ArrayXd>& llr_t) {
  const int b = static_cast<int>(llr_t.size());
  Eigen::ArrayXd half(1 << (b - 1));
  for (std::uint32_t bo = 0; bo < static_cast<std::uint32_t>(half.size()); ++bo) {
    half[bo] = branch_metric(bo, llr_t);
  }
  return half;
}

void fill_stage_table(const Eigen::Ref<const Eigen::ArrayXd>& llr_t, double* table) {
  const int b = static_cast<int>(llr_t.size());
  const std::uint32_t half = 1u << (b - 1);
  const std::uint32_t mask = (1u << b) - 1;
  for (std::uint32_t bo = 0; bo < half; ++bo) {
    table[bo] = branch_metric(bo, llr_t);
  }
  for (std::uint32_t bo = half; bo <= mask; ++bo) {
    table[bo] = -table[bo ^ mask];  // complement symmetry
  }
}

void acs_stage(const Eigen::ArrayXd& sigma_prev, const double* stage_table,
               const Trellis& trellis, Eigen::ArrayXd& sigma_cur,
               std::uint16_t* pi_col) {
  const int num_states = trellis.num_states();
  const std::uint32_t low_mask =
      static_cast<std::uint32_t>(num_states / 2 - 1);
  const std::uint32_t* in_out = trellis.incoming_output_data();
  const double* sp = sigma_prev.data();
  double* sc = sigma_cur.data();
  for (int j = 0; j < num_states; ++j) {
    const std::uint32_t i1 = (static_cast<std::uint32_t>(j) & low_mask) << 1;
    const std::uint32_t i2 = i1 | 1;
    const double s1 = sp[i1] + stage_table[in_out[2 * j]];
    const double s2 = sp[i2] + stage_table[in_out[2 * j + 1]];
    // Strict >: exact ties go to the second predecessor.
    if (s1 > s2) {
      sc[j] = s1;
      pi_col[j] = static_cast<std::uint16_t>(i1);
    } else {
      sc[j] = s2;
      pi_col[j] = static_cast<std::uint16_t>(i2);
    }
  }
}

namespace {

int argmax_state(const Eigen::ArrayXd& sigma) {
  int best = 0;
  double best_v = sigma[0];
  for (int j = 1; j < sigma.size(); ++j) {
    if (sigma[j] > best_v) {
      best_v = sigma[j];
      best = j;
    }
  }
  return best;
}

void check_block(const LlrBlock& llr, const Trellis& trellis) {
  if (llr.cols() < 1) throw std::invalid_argument("empty llr block");
  if (llr.rows() != trellis.outputs_per_bit()) {
    throw std::invalid_argument("llr row count must equal B");
  }
}

}  // namespace

DecodeOutput serial_decode(const LlrBlock& llr, const Trellis& trellis) {
  check_block(llr, trellis);
  const int num_states = trellis.num_states();
  const Eigen::Index n = llr.cols();

  std::vector<std::uint16_t> pi(static_cast<std::size_t>(num_states) * n);
  Eigen::ArrayXd sigma_prev = Eigen::ArrayXd::Zero(num_states);
  Eigen::ArrayXd sigma_cur(num_states);
  std::vector<double> table(std::size_t{1} << trellis.outputs_per_bit());

  for (Eigen::Index t = 0; t < n; ++t) {
    fill_stage_table(llr.col(t), table.data());
    acs_stage(sigma_prev, table.data(), trellis, sigma_cur,
              pi.data() + static_cast<std::size_t>(t) * num_states);
    sigma_prev.swap(sigma_cur);
  }

  DecodeOutput out;
  out.bits.resize(n);
  int state = argmax_state(sigma_prev);
  for (Eigen::Index t = n - 1; t >= 0; --t) {
    out.bits[t] = static_cast<std::uint8_t>(trellis.branch_input(state));
    state = pi[static_cast<std::size_t>(t) * num_states + state];
  }
  out.stats.frames = 1;
  out.stats.stages = n;
  out.stats.tracebacks = 1;
  return out;
}

LlrBlock depuncture(const Eigen::Ref<const Eigen::ArrayXd>& punctured,
                    const PuncturePattern& pattern) {
  pattern.validate();
  // Determine how many stages the stream covers; it must end exactly on a
  // column boundary of the replicated mask.
  std::vector<int> col_kept(pattern.period);
  for (int col = 0; col < pattern.period; ++col) {
    int kept = 0;
    for (int row = 0; row < pattern.b; ++row) kept += pattern.at(row, col);
    col_kept[col] = kept;
  }
  const int per_period = pattern.kept_per_period();
  Eigen::Index remaining = punctured.size();
  Eigen::Index stages = (remaining / per_period) * pattern.period;
  remaining %= per_period;
  for (int col = 0; remaining > 0; ++col) {
    if (col >= pattern.period || remaining < col_kept[col]) {
      throw std::invalid_argument("punctured length inconsistent with pattern");
    }
    remaining -= col_kept[col];
    ++stages;
  }

  LlrBlock block = LlrBlock::Zero(pattern.b, stages);
  Eigen::Index idx = 0;
  for (Eigen::Index t = 0; t < stages; ++t) {
    const int col = static_cast<int>(t % pattern.period);
    for (int row = 0; row < pattern.b; ++row) {
      if (pattern.at(row, col)) block(row, t) = punctured[idx++];
    }
  }
  return block;
}

namespace {

// One tile of the framed decoder: forward pass over the clipped stage
// range, then one traceback per subframe, writing only the frame's own
// output slice.
void decode_frame(const LlrBlock& llr, const Trellis& trellis,
                  const FrameConfig& cfg, std::int64_t frame,
                  std::uint8_t* out_bits) {
  const int num_states = trellis.num_states();
  const Eigen::Index n = llr.cols();
  const Eigen::Index out_lo = frame * cfg.f;
  const Eigen::Index out_hi = std::min<Eigen::Index>(out_lo + cfg.f, n);
  const Eigen::Index beg = std::max<Eigen::Index>(out_lo - cfg.v1, 0);
  const Eigen::Index end = std::min<Eigen::Index>(out_hi + cfg.v2, n);
  const Eigen::Index len = end - beg;

  // Subframe layout over [out_lo, out_hi); f0 == 0 means one subframe.
  const Eigen::Index step = cfg.f0 > 0 ? cfg.f0 : (out_hi - out_lo);
  const Eigen::Index num_sub = (out_hi - out_lo + step - 1) / step;

  // Local traceback start stage per subframe: v2 past its right boundary,
  // clipped to the frame's last processed stage.
  std::vector<Eigen::Index> start_stage(num_sub);
  for (Eigen::Index s = 0; s < num_sub; ++s) {
    const Eigen::Index sub_hi = std::min(out_lo + (s + 1) * step, out_hi);
    start_stage[s] = std::min<Eigen::Index>(sub_hi + cfg.v2, end) - 1 - beg;
  }

  std::vector<std::uint16_t> pi(static_cast<std::size_t>(num_states) * len);
  std::vector<std::uint16_t> start_state(num_sub, 0);
  Eigen::ArrayXd sigma_prev = Eigen::ArrayXd::Zero(num_states);
  Eigen::ArrayXd sigma_cur(num_states);
  std::vector<double> table(std::size_t{1} << trellis.outputs_per_bit());

  Eigen::Index next_record = 0;
  for (Eigen::Index t = 0; t < len; ++t) {
    fill_stage_table(llr.col(beg + t), table.data());
    acs_stage(sigma_prev, table.data(), trellis, sigma_cur,
              pi.data() + static_cast<std::size_t>(t) * num_states);
    sigma_prev.swap(sigma_cur);
    // Record the best state at every traceback start stage (start stages
    // are non-decreasing in s).
    while (next_record < num_sub && start_stage[next_record] == t) {
      start_state[next_record] =
          static_cast<std::uint16_t>(argmax_state(sigma_prev));
      ++next_record;
    }
  }

  for (Eigen::Index s = 0; s < num_sub; ++s) {
    const Eigen::Index sub_lo = out_lo + s * step;
    const Eigen::Index sub_hi = std::min(sub_lo + step, out_hi);
    int state;
    // A random start only substitutes for path metrics that are not yet
    // available at an interior subframe boundary; at the frame's final
    // stage the forward pass has just produced them, so use the max state.
    if (cfg.f0 > 0 && cfg.start == TracebackStart::kRandom &&
        start_stage[s] < len - 1) {
      state = static_cast<int>(
          mix_seed(cfg.seed, static_cast<std::uint64_t>(frame) * 0x10001 + s) %
          num_states);
    } else {
      state = start_state[s];
    }
    for (Eigen::Index t = start_stage[s]; t >= sub_lo - beg; --t) {
      const Eigen::Index stage = beg + t;
      if (stage < sub_hi) {
        out_bits[stage] = static_cast<std::uint8_t>(trellis.branch_input(state));
      }
      state = pi[static_cast<std::size_t>(t) * num_states + state];
    }
  }
}

}  // namespace

DecodeOutput framed_decode(const LlrBlock& llr, const Trellis& trellis,
                           const FrameConfig& cfg, int workers) {
  check_block(llr, trellis);
  cfg.validate();
  const Eigen::Index n = llr.cols();
  const std::int64_t num_frames = (n + cfg.f - 1) / cfg.f;

  DecodeOutput out;
  out.bits.resize(n);
  parallel_for_chunks(num_frames, workers, [&](std::int64_t first, std::int64_t last) {
    for (std::int64_t m = first; m < last; ++m) {
      decode_frame(llr, trellis, cfg, m, out.bits.data());
    }
  });

  out.stats.frames = num_frames;
  for (std::int64_t m = 0; m < num_frames; ++m) {
    const Eigen::Index out_lo = m * cfg.f;
    const Eigen::Index out_hi = std::min<Eigen::Index>(out_lo + cfg.f, n);
    const Eigen::Index beg = std::max<Eigen::Index>(out_lo - cfg.v1, 0);
    const Eigen::Index end = std::min<Eigen::Index>(out_hi + cfg.v2, n);
    out.stats.stages += end - beg;
    const Eigen::Index step = cfg.f0 > 0 ? cfg.f0 : (out_hi - out_lo);
    out.stats.tracebacks += (out_hi - out_lo + step - 1) / step;
  }
  return out;
}

}  // namespace vitdec
