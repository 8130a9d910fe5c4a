#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "soup/errors.hpp"

namespace soup::detail {

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are not supported");

inline void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

inline void write_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

inline std::uint32_t read_u32(std::istream& is, const std::string& context) {
  std::uint32_t v = 0;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
    throw IoError(context + ": truncated file (u32)");
  return v;
}

inline double read_f64(std::istream& is, const std::string& context) {
  double v = 0.0;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
    throw IoError(context + ": truncated file (f64)");
  return v;
}

inline void expect_magic(std::istream& is, const char* magic, const std::string& context) {
  char buf[9] = {0};
  const std::size_t len = std::strlen(magic);
  if (!is.read(buf, static_cast<std::streamsize>(len)) || std::strncmp(buf, magic, len) != 0)
    throw IoError(context + ": bad magic, expected " + magic);
}

}  // namespace soup::detail
