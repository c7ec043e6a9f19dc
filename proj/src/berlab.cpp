#include "vitdec/berlab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vitdec/parallel.hpp"

namespace vitdec {

std::string SweepSetup::mode_name() const {
  std::string mode;
  if (!frame) {
    mode = "serial";
  } else if (frame->f0 == 0) {
    mode = "framed";
  } else if (frame->start == TracebackStart::kRandom) {
    mode = "framed-pt-random";
  } else {
    mode = "framed-pt";
  }
  if (hard) mode += "-hard";
  return mode;
}

namespace {

std::int64_t count_errors(const BitVec& sent, const BitVec& decoded) {
  std::int64_t errors = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) {
    errors += sent[i] != decoded[i];
  }
  return errors;
}

}  // namespace

std::vector<BerPoint> run_ber_sweep(const SweepSetup& setup) {
  const Trellis trellis = build_trellis(setup.spec);
  setup.pattern.validate();
  if (setup.pattern.b != setup.spec.b) {
    throw std::invalid_argument("puncture pattern B mismatch");
  }
  if (setup.frame) setup.frame->validate(setup.pattern.period);
  const double rate = setup.pattern.rate();
  const std::int64_t block_bits = std::max<std::int64_t>(setup.block_bits, 1);

  std::vector<BerPoint> points;
  points.reserve(setup.ebn0_db.size());
  for (std::size_t p = 0; p < setup.ebn0_db.size(); ++p) {
    const double ebn0 = setup.ebn0_db[p];
    const double sigma = setup.sigma_override ? *setup.sigma_override
                                              : sigma_from_ebn0(ebn0, rate);
    const std::int64_t num_blocks =
        (setup.bits_per_point + block_bits - 1) / block_bits;
    std::vector<std::int64_t> block_errors(num_blocks, 0);
    std::vector<std::int64_t> block_sizes(num_blocks, 0);

    parallel_for_chunks(num_blocks, setup.workers, [&](std::int64_t first,
                                                       std::int64_t last) {
      for (std::int64_t blk = first; blk < last; ++blk) {
        const std::int64_t n = std::min<std::int64_t>(
            block_bits, setup.bits_per_point - blk * block_bits);
        const std::uint64_t block_seed =
            mix_seed(setup.seed, p * 0x100000ull + static_cast<std::uint64_t>(blk));
        const BitVec sent = random_bits(static_cast<std::size_t>(n),
                                        mix_seed(block_seed, 1));
        const BitVec coded = encode(sent, trellis);
        const BitVec tx = setup.pattern.is_identity()
                              ? coded
                              : puncture(coded, setup.pattern);
        const Eigen::ArrayXd received =
            awgn(modulate_bpsk(tx), sigma, mix_seed(block_seed, 2));
        LlrBlock llr = setup.pattern.is_identity()
                           ? to_block(received, setup.spec.b)
                           : depuncture(received, setup.pattern);
        if (setup.hard) llr = hard_quantize(llr);
        const DecodeOutput decoded =
            setup.frame ? framed_decode(llr, trellis, *setup.frame)
                        : serial_decode(llr, trellis);
        block_errors[blk] = count_errors(sent, decoded.bits);
        block_sizes[blk] = n;
      }
    });

    BerPoint pt;
    pt.ebn0_db = ebn0;
    for (std::int64_t blk = 0; blk < num_blocks; ++blk) {
      pt.bits += block_sizes[blk];
      pt.errors += block_errors[blk];
    }
    points.push_back(pt);
  }
  return points;
}

double interpolate_ebn0(const std::vector<BerPoint>& curve, double target_ber) {
  if (target_ber <= 0.0) throw std::invalid_argument("target BER must be > 0");
  std::vector<BerPoint> pts;
  for (const BerPoint& p : curve) {
    if (p.valid() && p.ber() > 0.0) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end(),
            [](const BerPoint& a, const BerPoint& b) { return a.ebn0_db < b.ebn0_db; });
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double hi = pts[i].ber();
    const double lo = pts[i + 1].ber();
    if (hi >= target_ber && target_ber >= lo && hi > lo) {
      const double frac =
          (std::log(target_ber) - std::log(hi)) / (std::log(lo) - std::log(hi));
      return pts[i].ebn0_db + frac * (pts[i + 1].ebn0_db - pts[i].ebn0_db);
    }
  }
  throw std::runtime_error("BER curve does not bracket the target BER");
}

GapReport ebn0_gap(const std::vector<BerPoint>& measured,
                   const std::vector<BerPoint>& reference, double target_ber) {
  GapReport r;
  r.target_ber = target_ber;
  r.measured_ebn0_db = interpolate_ebn0(measured, target_ber);
  r.reference_ebn0_db = interpolate_ebn0(reference, target_ber);
  r.gap_db = r.measured_ebn0_db - r.reference_ebn0_db;
  return r;
}

std::vector<BenchRow> run_throughput_bench(const CodeSpec& spec,
                                           const std::vector<FrameConfig>& cfgs,
                                           const std::vector<int>& worker_counts,
                                           std::int64_t stages, double ebn0_db,
                                           std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  const Trellis trellis = build_trellis(spec);
  const BitVec sent = random_bits(static_cast<std::size_t>(stages), mix_seed(seed, 1));
  const double sigma = sigma_from_ebn0(ebn0_db, spec.base_rate());
  const Eigen::ArrayXd received =
      awgn(modulate_bpsk(encode(sent, trellis)), sigma, mix_seed(seed, 2));
  const LlrBlock llr = to_block(received, spec.b);

  std::vector<BenchRow> rows;
  for (const FrameConfig& cfg : cfgs) {
    cfg.validate();
    // Warm-up on a prefix, untimed.
    const Eigen::Index warm = std::min<Eigen::Index>(llr.cols(), 1 << 16);
    (void)framed_decode(llr.leftCols(warm), trellis, cfg);
    double base_mbps = 0.0;
    for (int w : worker_counts) {
      const auto t0 = clock::now();
      (void)framed_decode(llr, trellis, cfg, w);
      const double sec = std::chrono::duration<double>(clock::now() - t0).count();
      BenchRow row;
      row.cfg = cfg;
      row.workers = w;
      row.mbit_per_s = static_cast<double>(stages) / sec / 1e6;
      if (base_mbps == 0.0 && w == 1) base_mbps = row.mbit_per_s;
      row.speedup = base_mbps > 0.0 ? row.mbit_per_s / base_mbps : 1.0;
      rows.push_back(row);
    }
  }
  return rows;
}

SweepResult make_result(const SweepSetup& setup, std::vector<BerPoint> points) {
  SweepResult r;
  r.mode = setup.mode_name();
  r.spec = setup.spec;
  // rate column reports input bits per transmitted bit after puncturing.
  r.rate = setup.pattern.rate();
  if (setup.frame) r.cfg = *setup.frame;
  r.seed = setup.seed;
  r.points = std::move(points);
  return r;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string polys_colon(const CodeSpec& spec) {
  std::string s = spec.polys_octal();
  std::replace(s.begin(), s.end(), ',', ':');
  return s;
}

}  // namespace

void emit_csv(const std::vector<SweepResult>& results, std::ostream& os) {
  os << "mode,k,polys,rate,f,v1,v2,f0,ebn0_db,bits,errors,ber,valid,seed\n";
  for (const SweepResult& r : results) {
    for (const BerPoint& p : r.points) {
      os << r.mode << ',' << r.spec.k << ',' << polys_colon(r.spec) << ','
         << fmt_double(r.rate) << ',' << r.cfg.f << ',' << r.cfg.v1 << ','
         << r.cfg.v2 << ',' << r.cfg.f0 << ',' << fmt_double(p.ebn0_db) << ','
         << p.bits << ',' << p.errors << ',' << fmt_double(p.ber()) << ','
         << (p.valid() ? 1 : 0) << ',' << r.seed << '\n';
    }
  }
}

void emit_csv(const std::vector<SweepResult>& results, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  emit_csv(results, os);
}

std::vector<BerPoint> read_ber_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::vector<BerPoint> points;
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (fields.size() < 14) throw std::runtime_error("malformed CSV row: " + line);
    BerPoint p;
    p.ebn0_db = std::stod(fields[8]);
    p.bits = std::stoll(fields[9]);
    p.errors = std::stoll(fields[10]);
    points.push_back(p);
  }
  return points;
}

}  // namespace vitdec
