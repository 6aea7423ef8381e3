#pragma once

// Probe DFTs, dB conversion, phasor slices and result files.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "rswp/constants.hpp"
#include "rswp/error.hpp"
#include "rswp/scene.hpp"

namespace rswp {

using Phasor = std::complex<double>;

/// Running single-frequency DFT of one probe.
struct ProbeRecord {
  std::string id;
  double f0 = 0.0;
  double dt = 0.0;
  double acc_i = 0.0;  // sum sample*cos(w t)*dt
  double acc_q = 0.0;  // sum sample*(-sin(w t))*dt
  std::size_t samples = 0;
  std::vector<Phasor> window_history;
  Phasor phasor{};
  bool finalized = false;

  void reset_window() {
    acc_i = acc_q = 0.0;
    samples = 0;
  }
};

inline void dft_accumulate(ProbeRecord& rec, double sample, double t) {
  const double w = 2.0 * kPi * rec.f0 * t;
  rec.acc_i += sample * std::cos(w) * rec.dt;
  rec.acc_q += sample * -std::sin(w) * rec.dt;
  ++rec.samples;
}

/// Same as dft_accumulate with the twiddle precomputed; the run loop shares
/// one cos/sin pair across all probes of a step.
inline void dft_accumulate(ProbeRecord& rec, double sample, double cos_wt, double sin_wt) {
  rec.acc_i += sample * cos_wt * rec.dt;
  rec.acc_q += sample * -sin_wt * rec.dt;
  ++rec.samples;
}

/// Phasor of the current window, 2/T sum s e^{-jwt} dt, so cos(wt + phi)
/// maps to e^{j phi}. The window must span exactly
/// `n_periods` periods of f0.
inline Phasor window_phasor(const ProbeRecord& rec, double n_periods) {
  const double span = rec.samples * rec.dt * rec.f0;
  if (n_periods <= 0.0 || std::abs(span - n_periods) > 1e-9 * std::max(1.0, n_periods) ||
      std::abs(n_periods - std::round(n_periods)) > 1e-12) {
    throw PreconditionError("finalize_phasors: window is not a whole number of periods");
  }
  const double T = n_periods / rec.f0;
  return 2.0 / T * Phasor(rec.acc_i, rec.acc_q);
}

inline void finalize_phasors(std::span<ProbeRecord> records, double n_periods) {
  for (auto& r : records) {
    r.phasor = window_phasor(r, n_periods);
    r.finalized = true;
  }
}

inline double to_db(double mag, double ref) {
  if (!(ref > 0.0)) throw PreconditionError("to_db: reference magnitude must be positive");
  return 20.0 * std::log10(mag / ref);
}

inline std::vector<double> to_db(std::span<const double> mags, double ref) {
  std::vector<double> out;
  out.reserve(mags.size());
  for (double m : mags) out.push_back(to_db(m, ref));
  return out;
}

// ---------------------------------------------------------------------------
// Field slices

enum class SliceAxis { X = 0, Y = 1, Z = 2 };

/// Complex phasor raster of one E component on a grid plane. Values are
/// row-major: value(col, row) = values[row * nx + col].
struct FieldSlice {
  SliceAxis axis = SliceAxis::Z;
  std::size_t offset = 0;  // node index along `axis`
  std::uint32_t component = 2;  // 0 Ex, 1 Ey, 2 Ez
  std::uint32_t nx = 0, ny = 0;
  double spacing = 0.0;  // m
  std::vector<Phasor> values;

  Phasor& at(std::size_t col, std::size_t row) { return values[row * nx + col]; }
  const Phasor& at(std::size_t col, std::size_t row) const { return values[row * nx + col]; }
};

inline constexpr char kRasterMagic[4] = {'R', 'S', 'W', 'P'};
inline constexpr std::uint32_t kRasterVersion = 1;
inline constexpr std::size_t kRasterHeaderBytes = 24;

namespace detail {

inline void put_u32(std::string& b, std::uint32_t v) {
  for (int s = 0; s < 32; s += 8) b.push_back(static_cast<char>((v >> s) & 0xff));
}
inline void put_f32(std::string& b, float f) {
  std::uint32_t v;
  static_assert(sizeof v == sizeof f);
  std::memcpy(&v, &f, sizeof v);
  put_u32(b, v);
}
inline std::uint32_t get_u32(const std::string& b, std::size_t at) {
  std::uint32_t v = 0;
  for (int s = 0; s < 4; ++s) v |= std::uint32_t(static_cast<unsigned char>(b[at + s])) << (8 * s);
  return v;
}
inline float get_f32(const std::string& b, std::size_t at) {
  const std::uint32_t v = get_u32(b, at);
  float f;
  std::memcpy(&f, &v, sizeof f);
  return f;
}

}  // namespace detail

/// Writes `data` to `path` through a temporary file and a rename, so a
/// reader never observes a half-written file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& data) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp.string() + " for writing");
    os.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!os) throw IoError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename to " + path.string() + " failed: " + ec.message());
}

/// On-disk form of a slice: float32 magnitude and phase planes.
struct Raster {
  std::uint32_t nx = 0, ny = 0;
  float spacing_mm = 0.0f;
  std::uint32_t component = 2;
  std::vector<float> magnitude;
  std::vector<float> phase;

  friend bool operator==(const Raster&, const Raster&) = default;
};

inline Raster to_raster(const FieldSlice& s) {
  if (s.values.size() != std::size_t(s.nx) * s.ny) throw PreconditionError("to_raster: raster dims mismatch");
  Raster r{s.nx, s.ny, static_cast<float>(s.spacing / kMm), s.component, {}, {}};
  r.magnitude.reserve(s.values.size());
  r.phase.reserve(s.values.size());
  for (const auto& v : s.values) {
    r.magnitude.push_back(static_cast<float>(std::abs(v)));
    r.phase.push_back(static_cast<float>(std::arg(v)));
  }
  return r;
}

inline std::string encode_raster(const Raster& r) {
  const std::size_t n = std::size_t(r.nx) * r.ny;
  if (r.magnitude.size() != n || r.phase.size() != n) throw PreconditionError("encode_raster: dims mismatch");
  std::string b;
  b.reserve(kRasterHeaderBytes + 8 * n);
  b.append(kRasterMagic, 4);
  detail::put_u32(b, kRasterVersion);
  detail::put_u32(b, r.nx);
  detail::put_u32(b, r.ny);
  detail::put_f32(b, r.spacing_mm);
  detail::put_u32(b, r.component);
  for (float v : r.magnitude) detail::put_f32(b, v);
  for (float v : r.phase) detail::put_f32(b, v);
  return b;
}

inline Raster decode_raster(const std::string& b) {
  if (b.size() < kRasterHeaderBytes || b.compare(0, 4, kRasterMagic, 4) != 0) {
    throw ParseError("raster: bad magic");
  }
  if (detail::get_u32(b, 4) != kRasterVersion) throw ParseError("raster: unsupported version");
  Raster r;
  r.nx = detail::get_u32(b, 8);
  r.ny = detail::get_u32(b, 12);
  r.spacing_mm = detail::get_f32(b, 16);
  r.component = detail::get_u32(b, 20);
  const std::size_t n = std::size_t(r.nx) * r.ny;
  if (b.size() != kRasterHeaderBytes + 8 * n) throw ParseError("raster: truncated payload");
  r.magnitude.resize(n);
  r.phase.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    r.magnitude[q] = detail::get_f32(b, kRasterHeaderBytes + 4 * q);
    r.phase[q] = detail::get_f32(b, kRasterHeaderBytes + 4 * (n + q));
  }
  return r;
}

inline void write_slice(const FieldSlice& s, const std::filesystem::path& path) {
  write_file_atomic(path, encode_raster(to_raster(s)));
}

inline Raster read_raster(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return decode_raster(ss.str());
}

// ---------------------------------------------------------------------------
// Probe tables

inline constexpr const char* kProbeCsvHeader = "scenario,probe_id,line,dist_lambda,x_mm,y_mm,z_mm,mag,phase_rad,db";

struct ProbeRow {
  std::string probe_id;
  ProbeLine line = ProbeLine::Free;
  double dist_lambda = 0.0;
  Vec3 position;
  Phasor phasor{};
  double db = 0.0;
};

inline std::string probe_csv(const std::string& scenario, std::span<const ProbeRow> rows) {
  std::string out = kProbeCsvHeader;
  out += '\n';
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%.4f,%.4f,%.4f,%.4f,%.9e,%.9f,%.6f\n", scenario.c_str(),
                  r.probe_id.c_str(), to_string(r.line), r.dist_lambda, r.position.x / kMm, r.position.y / kMm,
                  r.position.z / kMm, std::abs(r.phasor), std::arg(r.phasor), r.db);
    out += buf;
  }
  return out;
}

inline ProbeLine parse_probe_line(const std::string& s) {
  if (s == "in_path") return ProbeLine::InPath;
  if (s == "tilted") return ProbeLine::Tilted;
  if (s == "free") return ProbeLine::Free;
  throw ParseError("probe table: unknown line tag '" + s + "'");
}

/// Inverse of probe_csv. Fills `scenario` from the first data row.
inline std::vector<ProbeRow> parse_probe_csv(const std::string& text, std::string* scenario = nullptr) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kProbeCsvHeader) throw ParseError("probe table: bad header");
  std::vector<ProbeRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t a = 0;
    for (std::size_t b; (b = line.find(',', a)) != std::string::npos; a = b + 1) f.push_back(line.substr(a, b - a));
    f.push_back(line.substr(a));
    if (f.size() != 10) throw ParseError("probe table: expected 10 columns in '" + line + "'");
    try {
      ProbeRow r;
      r.probe_id = f[1];
      r.line = parse_probe_line(f[2]);
      r.dist_lambda = std::stod(f[3]);
      r.position = {std::stod(f[4]) * kMm, std::stod(f[5]) * kMm, std::stod(f[6]) * kMm};
      r.phasor = std::polar(std::stod(f[7]), std::stod(f[8]));
      r.db = std::stod(f[9]);
      if (scenario && rows.empty()) *scenario = f[0];
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw ParseError("probe table: bad number in '" + line + "'");
    }
  }
  return rows;
}

}  // namespace rswp
