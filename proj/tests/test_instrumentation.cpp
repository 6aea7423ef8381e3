#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "rswp/instrumentation.hpp"

using namespace rswp;
namespace fs = std::filesystem;

namespace {

ProbeRecord sampled(double amp, double phi, double periods, int spp = 40) {
  ProbeRecord r;
  r.f0 = 30e9;
  r.dt = 1.0 / (r.f0 * spp);
  const int n = static_cast<int>(periods * spp);
  for (int q = 1; q <= n; ++q) {
    const double t = q * r.dt;
    dft_accumulate(r, amp * std::cos(2 * kPi * r.f0 * t + phi), t);
  }
  return r;
}

FieldSlice ramp_slice() {
  FieldSlice s;
  s.nx = 7;
  s.ny = 3;
  s.spacing = 0.25 * kMm;
  for (std::uint32_t q = 0; q < s.nx * s.ny; ++q) s.values.push_back(std::polar(0.1 * q + 1e-7, 0.3 * q - 3.0));
  return s;
}

fs::path scratch_dir(const char* name) {
  auto d = fs::temp_directory_path() / ("rswp_test_" + std::string(name));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Dft, RecoversAmplitudeAndPhase) {
  for (double phi : {0.0, 0.7, -2.5}) {
    const auto r = sampled(3.0, phi, 5.0);
    const Phasor p = window_phasor(r, 5.0);
    EXPECT_NEAR(std::abs(p), 3.0, 1e-12);
    EXPECT_NEAR(std::arg(p), phi, 1e-12);
  }
}

TEST(Dft, TravellingWavePhaseFallsWithDistance) {
  const double k = 600.0;
  const Phasor a = window_phasor(sampled(1.0, -k * 0.010, 2.0), 2.0);
  const Phasor b = window_phasor(sampled(1.0, -k * 0.011, 2.0), 2.0);
  EXPECT_NEAR(std::remainder(std::arg(a) - std::arg(b), 2 * kPi), k * 0.001, 1e-9);
}

TEST(Dft, PartialWindowRejected) {
  const auto r = sampled(1.0, 0.0, 2.5);
  EXPECT_THROW(window_phasor(r, 2.5), PreconditionError);
  EXPECT_THROW(window_phasor(r, 3.0), PreconditionError);
}

TEST(Db, ReferenceAndLog) {
  EXPECT_DOUBLE_EQ(to_db(10.0, 1.0), 20.0);
  EXPECT_DOUBLE_EQ(to_db(2.0, 2.0), 0.0);
  EXPECT_THROW(to_db(1.0, 0.0), PreconditionError);
  const std::vector<double> m{1.0, 0.1};
  const auto v = to_db(m, 1.0);
  EXPECT_NEAR(v[1], -20.0, 1e-12);
}

TEST(Raster, RoundTripBitExact) {
  const Raster r = to_raster(ramp_slice());
  const Raster back = decode_raster(encode_raster(r));
  EXPECT_EQ(r, back);
  EXPECT_EQ(encode_raster(r).size(), kRasterHeaderBytes + 8u * 21u);
}

TEST(Raster, FileRoundTrip) {
  const auto dir = scratch_dir("raster");
  const auto p = dir / "sub" / "z.raster";
  write_slice(ramp_slice(), p);
  EXPECT_EQ(read_raster(p), to_raster(ramp_slice()));
  EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
  fs::remove_all(dir);
}

TEST(Raster, CorruptInputRejected) {
  const std::string good = encode_raster(to_raster(ramp_slice()));
  std::string bad = good;
  bad[0] = 'X';
  EXPECT_THROW(decode_raster(bad), ParseError);
  bad = good;
  bad[4] = 9;
  EXPECT_THROW(decode_raster(bad), ParseError);
  EXPECT_THROW(decode_raster(good.substr(0, good.size() - 1)), ParseError);
  EXPECT_THROW(decode_raster(""), ParseError);
}

TEST(Raster, DimensionMismatch) {
  FieldSlice s = ramp_slice();
  s.values.pop_back();
  EXPECT_THROW(to_raster(s), PreconditionError);
}

TEST(ProbeTable, HeaderAndRowFormat) {
  std::vector<ProbeRow> rows{{"p5", ProbeLine::InPath, 5.0, {0.05, 0.0, 0.002}, std::polar(0.5, 1.0), -1.25}};
  const std::string csv = probe_csv("straight_galinstan", rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kProbeCsvHeader);
  EXPECT_NE(csv.find("straight_galinstan,p5,in_path,5.0000,50.0000,0.0000,2.0000,"), std::string::npos);
}

TEST(ProbeTable, ParseRoundTrip) {
  std::vector<ProbeRow> rows{{"p1", ProbeLine::InPath, 1.0, {0.01, 0.0, 0.002}, std::polar(0.25, -0.5), 0.0},
                             {"t1", ProbeLine::Tilted, 1.0, {0.01, 0.0008, 0.002}, std::polar(1e-3, 2.0), -47.9}};
  std::string name;
  const auto back = parse_probe_csv(probe_csv("demo", rows), &name);
  EXPECT_EQ(name, "demo");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].line, ProbeLine::Tilted);
  EXPECT_NEAR(std::abs(back[0].phasor), 0.25, 1e-9);
  EXPECT_NEAR(std::arg(back[0].phasor), -0.5, 1e-9);
  EXPECT_NEAR(back[1].position.y, 0.0008, 1e-10);
  EXPECT_NEAR(back[1].db, -47.9, 1e-6);
  // Writing the parsed table reproduces the file.
  EXPECT_EQ(probe_csv("demo", back), probe_csv("demo", rows));
}

TEST(ProbeTable, MalformedRejected) {
  EXPECT_THROW(parse_probe_csv("a,b\n"), ParseError);
  const std::string h = std::string(kProbeCsvHeader) + "\n";
  EXPECT_THROW(parse_probe_csv(h + "s,p,in_path,1\n"), ParseError);
  EXPECT_THROW(parse_probe_csv(h + "s,p,sideways,1,0,0,0,1,0,0\n"), ParseError);
  EXPECT_THROW(parse_probe_csv(h + "s,p,in_path,one,0,0,0,1,0,0\n"), ParseError);
  EXPECT_TRUE(parse_probe_csv(h).empty());
}

TEST(AtomicWrite, ReplacesExistingFile) {
  const auto dir = scratch_dir("atomic");
  const auto p = dir / "f.txt";
  write_file_atomic(p, "first");
  write_file_atomic(p, "second");
  std::ifstream is(p);
  std::string s;
  std::getline(is, s);
  EXPECT_EQ(s, "second");
  fs::remove_all(dir);
}
