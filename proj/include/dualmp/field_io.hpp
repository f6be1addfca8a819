#pragma once

// OMPF field dumps: "OMPF", version u32, dim u32, n[dim] u32,
// half-extent[dim] f64, then the row-major f64 payload. Little-endian.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "dualmp/grid.hpp"

namespace dualmp {

static_assert(std::endian::native == std::endian::little, "OMPF I/O assumes a little-endian host");

inline constexpr std::uint32_t ompf_version = 1;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class T>
void put(std::ostream& os, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  os.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& is) {
  char buf[sizeof(T)];
  if (!is.read(buf, sizeof(T))) {
    throw IoError("OMPF: truncated stream");
  }
  T v;
  std::memcpy(&v, buf, sizeof(T));
  return v;
}

}  // namespace detail

inline void write_ompf(std::ostream& os, const GridField& field) {
  const GridDomain& d = field.domain;
  os.write("OMPF", 4);
  detail::put<std::uint32_t>(os, ompf_version);
  detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(d.dim));
  for (int i = 0; i < d.dim; ++i) detail::put<std::uint32_t>(os, static_cast<std::uint32_t>(d.n[i]));
  for (int i = 0; i < d.dim; ++i) detail::put<double>(os, d.half_extent[i]);
  for (double v : field.values) detail::put<double>(os, v);
}

inline GridField read_ompf(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "OMPF", 4) != 0) {
    throw IoError("OMPF: bad magic");
  }
  if (detail::get<std::uint32_t>(is) != ompf_version) {
    throw IoError("OMPF: unsupported version");
  }
  GridDomain d;
  d.dim = static_cast<int>(detail::get<std::uint32_t>(is));
  if (d.dim != 2 && d.dim != 3) {
    throw IoError("OMPF: bad dimension");
  }
  for (int i = 0; i < 3; ++i) {
    d.n[i] = 1;
    d.half_extent[i] = 1.0;
  }
  for (int i = 0; i < d.dim; ++i) d.n[i] = static_cast<int>(detail::get<std::uint32_t>(is));
  for (int i = 0; i < d.dim; ++i) d.half_extent[i] = detail::get<double>(is);
  d.validate();
  GridField f(d);
  for (double& v : f.values) v = detail::get<double>(is);
  return f;
}

inline void write_ompf(const std::string& path, const GridField& field) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw IoError("cannot open " + path + " for writing");
  }
  write_ompf(os, field);
  if (!os) {
    throw IoError("write failed: " + path);
  }
}

inline GridField read_ompf(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw IoError("cannot open " + path);
  }
  return read_ompf(is);
}

}  // namespace dualmp
