#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "vitdec/decoder.hpp"

using namespace vitdec;

namespace {

Eigen::ArrayXd llr2(double a, double b) {
  Eigen::ArrayXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("branch metric") {
  CHECK(branch_metric(0b00, llr2(3, -1)) == 2.0);
  CHECK(branch_metric(0b11, llr2(3, -1)) == -2.0);
  CHECK(branch_metric(0b10, llr2(3, -1)) == -4.0);
  CHECK(branch_metric(0b01, llr2(3, -1)) == 4.0);
}

TEST_CASE("stage metrics and complement symmetry") {
  SUBCASE("B=2 example") {
    const Eigen::ArrayXd m = stage_metrics(llr2(3, -1));
    CHECK(m.size() == 2);
    CHECK(m[0] == 2.0);
    CHECK(m[1] == 4.0);
    double table[4];
    fill_stage_table(llr2(3, -1), table);
    CHECK(table[0b11] == -table[0b00]);
    CHECK(table[0b11] == -2.0);
  }
  SUBCASE("all-zero llr gives all-zero metrics") {
    CHECK((stage_metrics(llr2(0, 0)) == 0.0).all());
  }
  SUBCASE("reconstruction matches direct evaluation, random llr") {
    std::mt19937_64 eng(17);
    std::uniform_real_distribution<double> dist(-5, 5);
    for (int b : {2, 3}) {
      for (int iter = 0; iter < 200; ++iter) {
        Eigen::ArrayXd llr(b);
        for (int i = 0; i < b; ++i) llr[i] = dist(eng);
        std::vector<double> table(std::size_t{1} << b);
        fill_stage_table(llr, table.data());
        const std::uint32_t mask = (1u << b) - 1;
        for (std::uint32_t bo = 0; bo <= mask; ++bo) {
          CHECK(table[bo] == branch_metric(bo, llr));
          CHECK(branch_metric(bo ^ mask, llr) == -branch_metric(bo, llr));
        }
      }
    }
  }
}

TEST_CASE("acs stage") {
  const Trellis t75 = build_trellis(CodeSpec::from_octal(3, "7,5"));
  const int s = t75.num_states();

  SUBCASE("noiseless single stage puts metric B on the true successor") {
    // true branch: state 0, input 1 -> state 2, BO=11
    const LlrBlock llr = to_block(modulate_bpsk({1, 1}), 2);
    double table[4];
    fill_stage_table(llr.col(0), table);
    Eigen::ArrayXd prev = Eigen::ArrayXd::Zero(s), cur(s);
    std::vector<std::uint16_t> pi(s);
    acs_stage(prev, table, t75, cur, pi.data());
    CHECK(cur[2] == 2.0);
    for (int j = 0; j < s; ++j) {
      CHECK(cur[j] <= 2.0);
      // every survivor entry is a real predecessor
      const auto [p1, p2] = t75.predecessors(j);
      CHECK((pi[j] == p1 || pi[j] == p2));
    }
  }

  SUBCASE("exact tie selects the second predecessor") {
    double table[4] = {0, 0, 0, 0};
    Eigen::ArrayXd prev = Eigen::ArrayXd::Zero(s), cur(s);
    std::vector<std::uint16_t> pi(s);
    acs_stage(prev, table, t75, cur, pi.data());
    for (int j = 0; j < s; ++j) {
      CHECK(pi[j] == t75.predecessors(j).second);
    }
  }

  SUBCASE("two stages match exhaustive path enumeration") {
    std::mt19937_64 eng(23);
    for (int iter = 0; iter < 50; ++iter) {
      const LlrBlock llr = oracle::random_llr(2, 2, eng);
      Eigen::ArrayXd sigma = Eigen::ArrayXd::Zero(s), cur(s);
      std::vector<std::uint16_t> pi(s);
      double table[4];
      for (int t = 0; t < 2; ++t) {
        fill_stage_table(llr.col(t), table);
        acs_stage(sigma, table, t75, cur, pi.data());
        sigma.swap(cur);
      }
      // brute force over start state and two inputs
      Eigen::ArrayXd best = Eigen::ArrayXd::Constant(s, -1e30);
      for (int st = 0; st < s; ++st) {
        for (int u0 = 0; u0 < 2; ++u0) {
          for (int u1 = 0; u1 < 2; ++u1) {
            const std::uint32_t mid = t75.next_state(st, u0);
            const std::uint32_t end = t75.next_state(mid, u1);
            const double m = branch_metric(t75.branch_output(st, u0), llr.col(0)) +
                             branch_metric(t75.branch_output(mid, u1), llr.col(1));
            best[end] = std::max(best[end], m);
          }
        }
      }
      for (int j = 0; j < s; ++j) CHECK(sigma[j] == doctest::Approx(best[j]));
    }
  }
}

TEST_CASE("serial decode") {
  SUBCASE("noiseless roundtrip across codes") {
    std::mt19937_64 eng(31);
    for (const char* polys : {"7,5", "23,35", "171,133"}) {
      const int k = polys[0] == '7' ? 3 : (polys[0] == '2' ? 5 : 7);
      const CodeSpec spec = CodeSpec::from_octal(k, polys);
      const Trellis trellis = build_trellis(spec);
      const BitVec msg = random_bits(200, eng());
      const LlrBlock llr = to_block(modulate_bpsk(encode(msg, trellis)), spec.b);
      CHECK(serial_decode(llr, trellis).bits == msg);
    }
  }

  SUBCASE("matches the brute-force ML oracle at small N") {
    const CodeSpec spec = CodeSpec::from_octal(3, "7,5");
    const Trellis trellis = build_trellis(spec);
    std::mt19937_64 eng(37);
    for (int iter = 0; iter < 30; ++iter) {
      const int n = 4 + static_cast<int>(eng() % 7);
      const LlrBlock llr = oracle::random_llr(2, n, eng);
      CHECK(serial_decode(llr, trellis).bits == oracle::ml_decode(llr, spec));
    }
  }

  SUBCASE("corrects a single mid-stream flip, K=7") {
    const CodeSpec spec = CodeSpec::from_octal(7, "171,133");
    const Trellis trellis = build_trellis(spec);
    const BitVec msg = random_bits(64, 41);
    LlrBlock llr = to_block(modulate_bpsk(encode(msg, trellis)), spec.b);
    llr(1, 30) = -llr(1, 30);
    CHECK(serial_decode(llr, trellis).bits == msg);
  }

  SUBCASE("rejects empty input") {
    const Trellis trellis = build_trellis(CodeSpec::from_octal(3, "7,5"));
    CHECK_THROWS(serial_decode(LlrBlock(2, 0), trellis));
  }
}

TEST_CASE("depuncture") {
  SUBCASE("identity") {
    Eigen::ArrayXd stream(4);
    stream << 1, 2, 3, 4;
    const LlrBlock block = depuncture(stream, PuncturePattern::named("r12"));
    CHECK(block.rows() == 2);
    CHECK(block.cols() == 2);
    CHECK(block(1, 1) == 4.0);
  }
  SUBCASE("rate-2/3 reinsertion") {
    Eigen::ArrayXd stream(3);
    stream << 10, 20, 30;
    const LlrBlock block = depuncture(stream, PuncturePattern::named("r23"));
    CHECK(block.cols() == 2);
    CHECK(block(0, 0) == 10.0);
    CHECK(block(1, 0) == 20.0);
    CHECK(block(0, 1) == 30.0);
    CHECK(block(1, 1) == 0.0);
  }
  SUBCASE("puncture then depuncture restores kept positions") {
    std::mt19937_64 eng(43);
    for (const char* name : {"r23", "r34"}) {
      const PuncturePattern p = PuncturePattern::named(name);
      const BitVec msg = random_bits(60, eng());
      const Trellis trellis = build_trellis(CodeSpec::from_octal(7, "171,133"));
      const BitVec coded = encode(msg, trellis);
      const Eigen::ArrayXd tx = modulate_bpsk(puncture(coded, p));
      const LlrBlock block = depuncture(tx, p);
      CHECK(block.cols() == 60);
      for (Eigen::Index t = 0; t < block.cols(); ++t) {
        for (int row = 0; row < p.b; ++row) {
          if (p.at(row, static_cast<int>(t % p.period))) {
            CHECK(block(row, t) == (coded[t * p.b + row] ? -1.0 : 1.0));
          } else {
            CHECK(block(row, t) == 0.0);
          }
        }
      }
    }
  }
  SUBCASE("rejects inconsistent lengths") {
    Eigen::ArrayXd stream(4);
    stream << 1, 2, 3, 4;
    CHECK_THROWS(depuncture(stream, PuncturePattern::named("r23")));
  }
}

TEST_CASE("frame config validation") {
  FrameConfig cfg{.f = 32, .v1 = 8, .v2 = 8, .f0 = 40};
  CHECK_THROWS(cfg.validate());
  cfg.f0 = 16;
  CHECK_NOTHROW(cfg.validate());
  CHECK_THROWS(cfg.validate(3));  // puncture-period misalignment
  CHECK_NOTHROW(cfg.validate(2));
  CHECK_THROWS(FrameConfig{.f = 0}.validate());
}

TEST_CASE("framed decode") {
  const CodeSpec spec = CodeSpec::from_octal(7, "171,133");
  const Trellis trellis = build_trellis(spec);
  std::mt19937_64 eng(53);

  SUBCASE("single frame degenerates to the serial decoder") {
    for (int iter = 0; iter < 10; ++iter) {
      const int n = 50 + static_cast<int>(eng() % 200);
      const BitVec msg = random_bits(n, eng());
      const Eigen::ArrayXd rx =
          awgn(modulate_bpsk(encode(msg, trellis)), 1.0, eng());
      const LlrBlock llr = to_block(rx, spec.b);
      const FrameConfig cfg{.f = n + 10};
      CHECK(framed_decode(llr, trellis, cfg).bits == serial_decode(llr, trellis).bits);
    }
  }

  SUBCASE("noiseless recovery with tight frames") {
    const BitVec msg = random_bits(500, 61);
    const LlrBlock llr = to_block(modulate_bpsk(encode(msg, trellis)), spec.b);
    for (FrameConfig cfg : {FrameConfig{.f = 64, .v1 = 16, .v2 = 16},
                            FrameConfig{.f = 32, .v1 = 0, .v2 = 24},
                            FrameConfig{.f = 64, .v1 = 16, .v2 = 32, .f0 = 16}}) {
      CHECK(framed_decode(llr, trellis, cfg).bits == msg);
    }
  }

  SUBCASE("f0 = f matches serial per-frame traceback") {
    const BitVec msg = random_bits(1000, 67);
    const Eigen::ArrayXd rx = awgn(modulate_bpsk(encode(msg, trellis)), 0.9, 71);
    const LlrBlock llr = to_block(rx, spec.b);
    const FrameConfig serial_tb{.f = 128, .v1 = 20, .v2 = 40, .f0 = 0};
    const FrameConfig one_sub{.f = 128, .v1 = 20, .v2 = 40, .f0 = 128};
    CHECK(framed_decode(llr, trellis, serial_tb).bits ==
          framed_decode(llr, trellis, one_sub).bits);
  }

  SUBCASE("output independent of worker count") {
    const BitVec msg = random_bits(2000, 73);
    const Eigen::ArrayXd rx = awgn(modulate_bpsk(encode(msg, trellis)), 1.0, 79);
    const LlrBlock llr = to_block(rx, spec.b);
    const FrameConfig cfg{.f = 64, .v1 = 20, .v2 = 20, .f0 = 16};
    const BitVec one = framed_decode(llr, trellis, cfg, 1).bits;
    CHECK(framed_decode(llr, trellis, cfg, 4).bits == one);
  }

  SUBCASE("random-start traceback is seed-deterministic") {
    const BitVec msg = random_bits(1000, 83);
    const Eigen::ArrayXd rx = awgn(modulate_bpsk(encode(msg, trellis)), 1.0, 89);
    const LlrBlock llr = to_block(rx, spec.b);
    FrameConfig cfg{.f = 128, .v1 = 20, .v2 = 40, .f0 = 32,
                    .start = TracebackStart::kRandom, .seed = 5};
    const BitVec a = framed_decode(llr, trellis, cfg).bits;
    CHECK(framed_decode(llr, trellis, cfg).bits == a);
    cfg.seed = 6;
    CHECK(framed_decode(llr, trellis, cfg).bits != a);
  }

  SUBCASE("scaling invariance") {
    const BitVec msg = random_bits(800, 97);
    const Eigen::ArrayXd rx = awgn(modulate_bpsk(encode(msg, trellis)), 1.1, 101);
    const LlrBlock llr = to_block(rx, spec.b);
    const FrameConfig cfg{.f = 64, .v1 = 16, .v2 = 24, .f0 = 16};
    const BitVec base_serial = serial_decode(llr, trellis).bits;
    const BitVec base_framed = framed_decode(llr, trellis, cfg).bits;
    for (double c : {0.1, 3.0, 1000.0}) {
      const LlrBlock scaled = llr * c;
      CHECK(serial_decode(scaled, trellis).bits == base_serial);
      CHECK(framed_decode(scaled, trellis, cfg).bits == base_framed);
    }
  }

  SUBCASE("stats") {
    const LlrBlock llr = LlrBlock::Zero(2, 100);
    const FrameConfig cfg{.f = 32, .v1 = 8, .v2 = 8, .f0 = 16};
    const DecodeStats stats = framed_decode(llr, trellis, cfg).stats;
    CHECK(stats.frames == 4);
    CHECK(stats.tracebacks == 7);  // 2+2+2 full frames, last frame (4 bits) 1
  }
}
