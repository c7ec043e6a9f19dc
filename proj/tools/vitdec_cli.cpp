#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "vitdec/berlab.hpp"

namespace {

using namespace vitdec;

std::vector<double> parse_range(const std::string& text) {
  // "a:s:b" inclusive sweep, or a single value.
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(std::stod(tok));
  if (parts.size() == 1) return {parts[0]};
  if (parts.size() != 3 || parts[1] <= 0.0) {
    throw CLI::ValidationError("--ebn0 expects <value> or <start:step:stop>");
  }
  std::vector<double> out;
  for (double v = parts[0]; v <= parts[2] + 1e-9; v += parts[1]) out.push_back(v);
  return out;
}

PuncturePattern pattern_for(const std::string& rate, int b) {
  if (rate.empty()) {
    std::string ident = "1";
    for (int i = 1; i < b; ++i) ident += ";1";
    auto p = PuncturePattern::parse(ident);
    p.name = "identity";
    return p;
  }
  return PuncturePattern::named(rate);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

struct CodeOpts {
  int k = 7;
  std::string polys = "171,133";
  std::string rate;

  CodeSpec spec() const { return CodeSpec::from_octal(k, polys); }
};

struct FrameOpts {
  int f = 0;
  int v1 = 0;
  int v2 = 0;
  int f0 = 0;
  std::string tb = "serial";

  std::optional<FrameConfig> config(std::uint64_t seed) const {
    if (f == 0) return std::nullopt;
    FrameConfig cfg;
    cfg.f = f;
    cfg.v1 = v1;
    cfg.v2 = v2;
    cfg.f0 = f0;
    cfg.seed = seed;
    if (tb == "serial") {
      cfg.f0 = 0;
    } else if (tb == "parallel") {
      cfg.start = TracebackStart::kStoredMax;
    } else if (tb == "random-start") {
      cfg.start = TracebackStart::kRandom;
    } else {
      throw CLI::ValidationError("--tb must be serial, parallel or random-start");
    }
    return cfg;
  }
};

void add_code_opts(CLI::App* app, CodeOpts& c) {
  app->add_option("--k", c.k, "constraint length");
  app->add_option("--polys", c.polys, "generator polynomials, octal CSV");
  app->add_option("--rate", c.rate,
                  "puncture pattern: r12, r23, r34 or explicit mask like 11;10");
}

void add_frame_opts(CLI::App* app, FrameOpts& f) {
  app->add_option("--f", f.f, "frame size (0 = unframed serial decoder)");
  app->add_option("--v1", f.v1, "left overlap stages");
  app->add_option("--v2", f.v2, "right overlap stages");
  app->add_option("--f0", f.f0, "parallel-traceback subframe size (0 = serial)");
  app->add_option("--tb", f.tb, "traceback: serial, parallel, random-start");
}

int run_ber(const CodeOpts& code, const FrameOpts& frame, const std::string& ebn0,
            std::int64_t bits, std::uint64_t seed, double target_ber,
            std::optional<double> sigma, bool hard, int workers,
            const std::string& out) {
  SweepSetup setup;
  setup.spec = code.spec();
  setup.pattern = pattern_for(code.rate, setup.spec.b);
  setup.frame = frame.config(seed);
  setup.hard = hard;
  setup.ebn0_db = parse_range(ebn0);
  setup.bits_per_point =
      std::max<std::int64_t>(bits, static_cast<std::int64_t>(std::ceil(100.0 / target_ber)));
  setup.seed = seed;
  setup.sigma_override = sigma;
  setup.workers = workers;

  const auto points = run_ber_sweep(setup);
  std::vector<SweepResult> results{make_result(setup, points)};
  if (!out.empty()) {
    emit_csv(results, out);
  } else {
    emit_csv(results, std::cout);
  }
  for (const BerPoint& p : points) {
    std::fprintf(stderr, "ebn0=%.3f dB  ber=%.6g  errors=%lld%s\n", p.ebn0_db,
                 p.ber(), static_cast<long long>(p.errors),
                 p.valid() ? "" : "  [low-confidence]");
  }
  return 0;
}

int run_gap(const std::string& measured, const std::string& reference,
            double target_ber) {
  const auto m = read_ber_csv(measured);
  const auto r = read_ber_csv(reference);
  const GapReport g = ebn0_gap(m, r, target_ber);
  std::printf("target_ber=%.9g measured_ebn0_db=%.6f reference_ebn0_db=%.6f gap_db=%.6f\n",
              g.target_ber, g.measured_ebn0_db, g.reference_ebn0_db, g.gap_db);
  return 0;
}

int run_bench(const CodeOpts& code, const FrameOpts& frame,
              const std::string& workers, std::int64_t bits, double ebn0,
              std::uint64_t seed) {
  auto cfg = frame.config(seed);
  if (!cfg) throw CLI::ValidationError("bench requires --f");
  const auto rows = run_throughput_bench(code.spec(), {*cfg},
                                         parse_int_list(workers), bits, ebn0, seed);
  std::printf("f,v1,v2,f0,workers,mbit_per_s,speedup\n");
  for (const BenchRow& r : rows) {
    std::printf("%d,%d,%d,%d,%d,%.6g,%.6g\n", r.cfg.f, r.cfg.v1, r.cfg.v2,
                r.cfg.f0, r.workers, r.mbit_per_s, r.speedup);
  }
  return 0;
}

int run_decode(const CodeOpts& code, const FrameOpts& frame,
               const std::string& in, const std::string& out,
               std::uint64_t seed, int workers) {
  const CodeSpec spec = code.spec();
  const Trellis trellis = build_trellis(spec);
  const PuncturePattern pattern = pattern_for(code.rate, spec.b);

  std::ifstream is(in);
  if (!is) throw CLI::ValidationError("cannot open " + in);
  std::vector<double> values;
  double v;
  while (is >> v) values.push_back(v);
  Eigen::ArrayXd stream =
      Eigen::Map<const Eigen::ArrayXd>(values.data(), static_cast<Eigen::Index>(values.size()));

  const LlrBlock llr = pattern.is_identity() ? to_block(stream, spec.b)
                                             : depuncture(stream, pattern);
  const auto cfg = frame.config(seed);
  const DecodeOutput decoded = cfg ? framed_decode(llr, trellis, *cfg, workers)
                                   : serial_decode(llr, trellis);

  std::ostream* os = &std::cout;
  std::ofstream of;
  if (!out.empty()) {
    of.open(out);
    if (!of) throw CLI::ValidationError("cannot open " + out);
    os = &of;
  }
  for (std::uint8_t bit : decoded.bits) *os << static_cast<int>(bit);
  *os << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-decision Viterbi decoder lab: BER sweeps, Eb/N0 gaps, "
               "throughput benchmarks"};
  app.require_subcommand(1);

  CodeOpts code;
  FrameOpts frame;
  std::string ebn0 = "0:1:6";
  std::int64_t bits = 1'000'000;
  std::uint64_t seed = 1;
  double target_ber = 1e-4;
  double sigma = -1.0;
  bool hard = false;
  int workers = 1;
  std::string out;

  auto* ber = app.add_subcommand("ber", "run a BER sweep and emit CSV");
  add_code_opts(ber, code);
  add_frame_opts(ber, frame);
  ber->add_option("--ebn0", ebn0, "Eb/N0 sweep, dB: start:step:stop");
  ber->add_option("--bits", bits, "bits per point (auto-raised to 100/target-ber)");
  ber->add_option("--seed", seed, "RNG seed");
  ber->add_option("--target-ber", target_ber, "target BER for the bit budget");
  ber->add_option("--sigma", sigma, "override noise sigma (ignores --ebn0 calibration)");
  ber->add_flag("--hard", hard, "hard-quantize the LLRs before decoding");
  ber->add_option("--workers", workers, "worker threads");
  ber->add_option("--out", out, "output CSV path (default: stdout)");

  std::string measured, reference;
  auto* gap = app.add_subcommand("gap", "Eb/N0 gap between two BER CSVs");
  gap->add_option("--measured", measured, "measured curve CSV")->required();
  gap->add_option("--reference", reference, "reference curve CSV")->required();
  gap->add_option("--target-ber", target_ber, "BER at which to measure the gap");

  std::string worker_list = "1";
  double bench_ebn0 = 4.0;
  auto* bench = app.add_subcommand("bench", "decode-only throughput benchmark");
  add_code_opts(bench, code);
  add_frame_opts(bench, frame);
  bench->add_option("--workers", worker_list, "comma-separated worker counts");
  bench->add_option("--bits", bits, "stages to decode");
  bench->add_option("--ebn0", bench_ebn0, "Eb/N0 of the generated test block");
  bench->add_option("--seed", seed, "RNG seed");

  std::string in_path;
  auto* dec = app.add_subcommand("decode", "decode a whitespace-separated LLR file");
  add_code_opts(dec, code);
  add_frame_opts(dec, frame);
  dec->add_option("--in", in_path, "input LLR file")->required();
  dec->add_option("--out", out, "output bit file (default: stdout)");
  dec->add_option("--seed", seed, "seed for random-start traceback");
  dec->add_option("--workers", workers, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ber->parsed()) {
      return run_ber(code, frame, ebn0, bits, seed, target_ber,
                     sigma >= 0.0 ? std::optional<double>(sigma) : std::nullopt,
                     hard, workers, out);
    }
    if (gap->parsed()) return run_gap(measured, reference, target_ber);
    if (bench->parsed()) {
      return run_bench(code, frame, worker_list, bits, bench_ebn0, seed);
    }
    if (dec->parsed()) return run_decode(code, frame, in_path, out, seed, workers);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
