#pragma once

#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "anisowave/group.hpp"

namespace anisowave {

// GroupField binary format "GAF1": magic, then d, n, X, m, s_min, s_max as
// 64-bit little-endian words (integers as int64, reals as float64), then the
// scale-slice-major complex128 values.  |det A| rides along so a field can
// be integrated without rebuilding the matrix.

namespace detail {

template <typename T>
void write_le(std::ostream& os, T v) {
  static_assert(sizeof(T) == 8);
  os.write(reinterpret_cast<const char*>(&v), 8);
}

template <typename T>
T read_le(std::istream& is) {
  static_assert(sizeof(T) == 8);
  T v{};
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

}  // namespace detail

inline void write_gaf(std::ostream& os, const GroupField& f) {
  os.write("GAF1", 4);
  detail::write_le<std::int64_t>(os, f.grid.space.d);
  detail::write_le<std::int64_t>(os, f.grid.space.n);
  detail::write_le<double>(os, f.grid.space.X);
  detail::write_le<std::int64_t>(os, f.grid.scales.m);
  detail::write_le<double>(os, f.grid.scales.s_min);
  detail::write_le<double>(os, f.grid.scales.s_max);
  detail::write_le<double>(os, f.abs_det);
  for (const auto& z : f.v) {
    detail::write_le<double>(os, z.real());
    detail::write_le<double>(os, z.imag());
  }
}

inline void write_gaf(const std::string& path, const GroupField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("write_gaf: cannot open " + path);
  write_gaf(os, f);
}

inline GroupField read_gaf(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "GAF1", 4) != 0) throw ConfigError("read_gaf: bad magic");
  GroupField f;
  f.grid.space.d = static_cast<int>(detail::read_le<std::int64_t>(is));
  f.grid.space.n = static_cast<int>(detail::read_le<std::int64_t>(is));
  f.grid.space.X = detail::read_le<double>(is);
  f.grid.scales.m = static_cast<int>(detail::read_le<std::int64_t>(is));
  f.grid.scales.s_min = detail::read_le<double>(is);
  f.grid.scales.s_max = detail::read_le<double>(is);
  f.abs_det = detail::read_le<double>(is);
  const std::int64_t count = f.grid.space.points() * f.grid.scales.m;
  f.v.resize(static_cast<std::size_t>(count));
  for (auto& z : f.v) {
    const double re = detail::read_le<double>(is);
    const double im = detail::read_le<double>(is);
    z = cplx(re, im);
  }
  if (!is) throw ConfigError("read_gaf: truncated stream");
  return f;
}

inline GroupField read_gaf(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("read_gaf: cannot open " + path);
  return read_gaf(is);
}

// CSV export of one scale slice: header comment, then x coordinates,
// real and imaginary parts, deterministic row order.
inline void write_slice_csv(std::ostream& os, const GroupField& f, int j) {
  if (j < 0 || j >= f.grid.scales.m) throw ConfigError("write_slice_csv: slice out of range");
  os << "# anisowave scale slice: s=" << f.grid.scales.at(j) << " d=" << f.grid.space.d << " n=" << f.grid.space.n
     << " X=" << f.grid.space.X << "\n";
  os << (f.grid.space.d == 1 ? "x0,re,im\n" : "x0,x1,re,im\n");
  os << std::setprecision(17);
  for (std::int64_t k = 0; k < f.spatial_points(); ++k) {
    const Vec x = f.grid.space.point(k);
    for (int i = 0; i < f.grid.space.d; ++i) os << x(i) << ",";
    const cplx z = f.at(k, j);
    os << z.real() << "," << z.imag() << "\n";
  }
}

}  // namespace anisowave
