#include "vitdec/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace vitdec {

Eigen::ArrayXd modulate_bpsk(const BitVec& bits) {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = bits[i] ? -1.0 : 1.0;
  }
  return out;
}

double sigma_from_ebn0(double ebn0_db, double rate) {
  if (rate <= 0.0) throw std::invalid_argument("code rate must be positive");
  const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
  return std::sqrt(1.0 / (2.0 * rate * ebn0));
}

double NormalSampler::operator()() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  // Marsaglia polar method over [-1, 1)^2 doubles built from 53 random bits.
  for (;;) {
    const double u = 2.0 * ((eng_() >> 11) * 0x1.0p-53) - 1.0;
    const double v = 2.0 * ((eng_() >> 11) * 0x1.0p-53) - 1.0;
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * m;
    has_cached_ = true;
    return u * m;
  }
}

Eigen::ArrayXd awgn(const Eigen::Ref<const Eigen::ArrayXd>& symbols,
                    double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
  Eigen::ArrayXd out(symbols.size());
  if (sigma == 0.0) {
    out = symbols;
    return out;
  }
  NormalSampler normal(seed);
  for (Eigen::Index i = 0; i < symbols.size(); ++i) {
    out[i] = symbols[i] + sigma * normal();
  }
  return out;
}

LlrBlock to_block(const Eigen::Ref<const Eigen::ArrayXd>& stream, int b) {
  if (b < 1 || stream.size() % b != 0) {
    throw std::invalid_argument("stream length is not a multiple of B");
  }
  const Eigen::Index n = stream.size() / b;
  // Stage-major stream maps directly onto a column-major B x N array.
  return Eigen::Map<const LlrBlock>(stream.data(), b, n);
}

LlrBlock hard_quantize(const LlrBlock& llr) {
  return (llr < 0.0).select(-1.0, LlrBlock::Constant(llr.rows(), llr.cols(), 1.0));
}

BitVec random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  BitVec bits(n);
  std::uint64_t word = 0;
  int left = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (left == 0) {
      word = eng();
      left = 64;
    }
    bits[i] = static_cast<std::uint8_t>(word & 1);
    word >>= 1;
    --left;
  }
  return bits;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace vitdec
