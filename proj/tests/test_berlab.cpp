#include <doctest.h>

#include <sstream>

#include "vitdec/berlab.hpp"

using namespace vitdec;

namespace {

SweepSetup base_setup() {
  SweepSetup s;
  s.spec = CodeSpec::from_octal(7, "171,133");
  s.ebn0_db = {2.0, 4.0};
  s.bits_per_point = 20000;
  s.seed = 7;
  return s;
}

}  // namespace

TEST_CASE("sweep basics") {
  SUBCASE("noiseless override gives zero errors") {
    SweepSetup s = base_setup();
    s.sigma_override = 0.0;
    for (const BerPoint& p : run_ber_sweep(s)) {
      CHECK(p.errors == 0);
      CHECK(p.bits == 20000);
    }
  }
  SUBCASE("same seed reproduces points; workers do not change them") {
    const SweepSetup s = base_setup();
    const auto a = run_ber_sweep(s);
    auto b = run_ber_sweep(s);
    SweepSetup s2 = base_setup();
    s2.workers = 4;
    const auto c = run_ber_sweep(s2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].errors == b[i].errors);
      CHECK(a[i].errors == c[i].errors);
      CHECK(a[i].bits == b[i].bits);
    }
  }
  SUBCASE("noiseless punctured framed decode is exact") {
    for (const char* rate : {"r23", "r34"}) {
      SweepSetup s = base_setup();
      s.pattern = PuncturePattern::named(rate);
      s.sigma_override = 0.0;
      s.frame = FrameConfig{.f = 60, .v1 = 12, .v2 = 24};
      for (const BerPoint& p : run_ber_sweep(s)) CHECK(p.errors == 0);
    }
  }
  SUBCASE("serial soft decision near the canonical K=7 curve at 4 dB") {
    SweepSetup s = base_setup();
    s.ebn0_db = {4.0};
    s.bits_per_point = 4 << 20;
    const auto pts = run_ber_sweep(s);
    // order-of-magnitude check against the standard curve (~1e-4)
    CHECK(pts[0].ber() > 1e-5);
    CHECK(pts[0].ber() < 1e-3);
  }
}

TEST_CASE("validity gating") {
  BerPoint p{.ebn0_db = 1.0, .bits = 1000, .errors = 99};
  CHECK_FALSE(p.valid());
  p.errors = 100;
  CHECK(p.valid());
  CHECK(p.ber() == doctest::Approx(0.1));
}

TEST_CASE("ebn0 gap interpolation") {
  auto curve = [](double shift) {
    std::vector<BerPoint> pts;
    for (int i = 0; i < 6; ++i) {
      const double e = 2.0 + 0.5 * i + shift;
      BerPoint p;
      p.ebn0_db = e;
      p.bits = 100000000;
      // synthetic exponential curve: one decade per dB
      p.errors = static_cast<std::int64_t>(p.bits * std::pow(10.0, -1.0 - (e - shift - 2.0)));
      pts.push_back(p);
    }
    return pts;
  };
  SUBCASE("identical curves give zero gap") {
    const auto c = curve(0.0);
    const GapReport g = ebn0_gap(c, c, 1e-3);
    CHECK(g.gap_db == doctest::Approx(0.0));
  }
  SUBCASE("pure shift is recovered") {
    const GapReport g = ebn0_gap(curve(0.5), curve(0.0), 1e-3);
    CHECK(g.gap_db == doctest::Approx(0.5).epsilon(1e-6));
  }
  SUBCASE("target outside the span throws") {
    CHECK_THROWS(ebn0_gap(curve(0.0), curve(0.0), 1e-9));
  }
  SUBCASE("invalid points are excluded") {
    auto c = curve(0.0);
    for (auto& p : c) {
      p.bits = 1000;  // forces errors < 100 after rescale
      p.errors = 5;
    }
    CHECK_THROWS(interpolate_ebn0(c, 5e-3));
  }
}

TEST_CASE("csv emission") {
  SweepSetup s = base_setup();
  s.frame = FrameConfig{.f = 64, .v1 = 10, .v2 = 20, .f0 = 16};

  SUBCASE("empty results give a header-only file") {
    std::ostringstream os;
    emit_csv({}, os);
    CHECK(os.str() == "mode,k,polys,rate,f,v1,v2,f0,ebn0_db,bits,errors,ber,valid,seed\n");
  }
  SUBCASE("one point gives two lines") {
    SweepResult r = make_result(s, {BerPoint{.ebn0_db = 3.0, .bits = 1000, .errors = 50}});
    std::ostringstream os;
    emit_csv({r}, os);
    const std::string text = os.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(text.find("framed-pt,7,171:133,0.5,64,10,20,16,3,1000,50,0.05,0,7") != std::string::npos);
  }
  SUBCASE("byte-identical across reruns") {
    SweepSetup sw = base_setup();
    sw.bits_per_point = 5000;
    std::ostringstream a, b;
    emit_csv({make_result(sw, run_ber_sweep(sw))}, a);
    emit_csv({make_result(sw, run_ber_sweep(sw))}, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().size() > 60);
  }
  SUBCASE("read back what was written") {
    SweepResult r = make_result(s, {BerPoint{.ebn0_db = 3.25, .bits = 12345, .errors = 678}});
    const std::string path = "test_roundtrip.csv";
    emit_csv({r}, path);
    const auto pts = read_ber_csv(path);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].ebn0_db == 3.25);
    CHECK(pts[0].bits == 12345);
    CHECK(pts[0].errors == 678);
    std::remove(path.c_str());
  }
}

TEST_CASE("throughput bench returns sane rows") {
  const CodeSpec spec = CodeSpec::from_octal(7, "171,133");
  const FrameConfig cfg{.f = 128, .v1 = 16, .v2 = 16};
  const auto rows = run_throughput_bench(spec, {cfg}, {1}, 1 << 16, 4.0, 3);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mbit_per_s > 0.0);
  CHECK(rows[0].speedup == doctest::Approx(1.0));
}
