#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vitdec/channel.hpp"
#include "vitdec/codec.hpp"
#include "vitdec/decoder.hpp"
#include "vitdec/trellis.hpp"

namespace vitdec {

struct BerPoint {
  double ebn0_db = 0.0;
  std::int64_t bits = 0;
  std::int64_t errors = 0;

  double ber() const { return bits ? static_cast<double>(errors) / bits : 0.0; }
  /// Rule of thumb: a measured BER is trusted only past 100 errors.
  bool valid() const { return errors >= 100; }
};

/// End-to-end sweep description: transmitter (code + puncturing), channel
/// (Eb/N0 grid or fixed sigma, seeded), and receiver (serial reference
/// when `frame` is empty, framed otherwise; optionally hard-quantized).
struct SweepSetup {
  CodeSpec spec;
  PuncturePattern pattern = PuncturePattern::named("r12");
  std::optional<FrameConfig> frame;
  bool hard = false;
  std::vector<double> ebn0_db;
  std::int64_t bits_per_point = 1'000'000;
  std::int64_t block_bits = 1 << 16;
  std::uint64_t seed = 1;
  std::optional<double> sigma_override;
  int workers = 1;

  std::string mode_name() const;
};

/// Random bits -> encode -> puncture -> BPSK -> AWGN -> depuncture ->
/// decode -> count errors, one BerPoint per Eb/N0 value. Deterministic
/// for a given seed, independent of `workers`.
std::vector<BerPoint> run_ber_sweep(const SweepSetup& setup);

struct GapReport {
  double gap_db = 0.0;
  double target_ber = 0.0;
  double measured_ebn0_db = 0.0;
  double reference_ebn0_db = 0.0;
};

/// Horizontal dB distance between two BER curves at target_ber, using
/// log-linear interpolation (linear in Eb/N0, log in BER) between the
/// valid points bracketing the target. Throws std::runtime_error when a
/// curve does not bracket the target with valid points.
GapReport ebn0_gap(const std::vector<BerPoint>& measured,
                   const std::vector<BerPoint>& reference, double target_ber);
double interpolate_ebn0(const std::vector<BerPoint>& curve, double target_ber);

struct BenchRow {
  FrameConfig cfg;
  int workers = 1;
  double mbit_per_s = 0.0;
  double speedup = 1.0;  // vs the single-worker run of the same cfg
};

/// Decode-only wall-clock throughput of framed_decode over a pre-generated
/// noisy block of `stages` bits, for every (cfg, workers) combination.
/// One untimed warm-up run per cfg.
std::vector<BenchRow> run_throughput_bench(const CodeSpec& spec,
                                           const std::vector<FrameConfig>& cfgs,
                                           const std::vector<int>& worker_counts,
                                           std::int64_t stages, double ebn0_db,
                                           std::uint64_t seed);

/// One sweep's identity plus its measured points, as emitted to CSV.
struct SweepResult {
  std::string mode;
  CodeSpec spec;
  double rate = 0.5;
  FrameConfig cfg;  // all-zero for the serial decoder
  std::uint64_t seed = 0;
  std::vector<BerPoint> points;
};

SweepResult make_result(const SweepSetup& setup, std::vector<BerPoint> points);

/// Header + one row per point. Columns:
/// mode,k,polys,rate,f,v1,v2,f0,ebn0_db,bits,errors,ber,valid,seed
/// Polynomials are octal joined by ':' to keep the CSV comma-free; floats
/// carry 9 significant digits. Byte-identical across reruns.
void emit_csv(const std::vector<SweepResult>& results, std::ostream& os);
void emit_csv(const std::vector<SweepResult>& results, const std::string& path);

/// Read back the points of a CSV produced by emit_csv (ebn0_db, bits,
/// errors per row; all sweeps in the file are concatenated).
std::vector<BerPoint> read_ber_csv(const std::string& path);

}  // namespace vitdec
