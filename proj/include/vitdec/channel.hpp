#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "vitdec/codec.hpp"

namespace vitdec {

/// Soft values at the decoder input, B rows by N stages. Sign convention:
/// positive means bit 0 is more likely.
using LlrBlock = Eigen::ArrayXXd;

/// bit 0 -> +1, bit 1 -> -1.
Eigen::ArrayXd modulate_bpsk(const BitVec& bits);

/// Noise standard deviation for a given Eb/N0 (dB) and post-puncturing
/// code rate, unit-energy BPSK: sigma = sqrt(1 / (2 R 10^(EbN0/10))).
double sigma_from_ebn0(double ebn0_db, double rate);

/// Reproducible standard-normal sampler: std::mt19937_64 (standardized
/// output) driving a Marsaglia polar transform. Not thread-safe; use one
/// instance per worker.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}
  double operator()();

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// symbols + i.i.d. Gaussian(0, sigma^2); deterministic for a given seed.
Eigen::ArrayXd awgn(const Eigen::Ref<const Eigen::ArrayXd>& symbols,
                    double sigma, std::uint64_t seed);

/// Reshape a soft stream of length N*B into a B x N block (stage-major
/// stream, polys[0] value first within a stage).
LlrBlock to_block(const Eigen::Ref<const Eigen::ArrayXd>& stream, int b);

/// Collapse every soft value to its sign in {+1, -1}; 0 maps to +1.
LlrBlock hard_quantize(const LlrBlock& llr);

/// Uniform random bits from a seeded mt19937_64.
BitVec random_bits(std::size_t n, std::uint64_t seed);

/// splitmix64 step, used to derive independent per-block seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace vitdec
