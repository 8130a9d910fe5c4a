#include "soup/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "soup/binary_io.hpp"

namespace soup {

void write_image(const std::string& path, const Image& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_image: cannot open " + path);
  os.write("SOUPIMG1", 8);
  detail::write_u32(os, static_cast<std::uint32_t>(img.height));
  detail::write_u32(os, static_cast<std::uint32_t>(img.width));
  for (const Complex& z : img.pixels) {
    detail::write_f64(os, z.real());
    detail::write_f64(os, z.imag());
  }
  if (!os) throw IoError("write_image: write failed for " + path);
}

Image read_image(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_image: cannot open " + path);
  detail::expect_magic(is, "SOUPIMG1", "read_image " + path);
  const std::uint32_t h = detail::read_u32(is, path);
  const std::uint32_t w = detail::read_u32(is, path);
  Image img(h, w);
  for (Complex& z : img.pixels) {
    const double re = detail::read_f64(is, path);
    const double im = detail::read_f64(is, path);
    z = Complex(re, im);
  }
  return img;
}

void write_dictionary(const std::string& path, const DenseMatrix& dict) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_dictionary: cannot open " + path);
  os.write("SOUPDIC1", 8);
  detail::write_u32(os, static_cast<std::uint32_t>(dict.rows()));
  detail::write_u32(os, static_cast<std::uint32_t>(dict.cols()));
  for (const Complex& z : dict.data()) {
    detail::write_f64(os, z.real());
    detail::write_f64(os, z.imag());
  }
  if (!os) throw IoError("write_dictionary: write failed for " + path);
}

DenseMatrix read_dictionary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_dictionary: cannot open " + path);
  detail::expect_magic(is, "SOUPDIC1", "read_dictionary " + path);
  const std::uint32_t rows = detail::read_u32(is, path);
  const std::uint32_t cols = detail::read_u32(is, path);
  DenseMatrix dict(rows, cols);
  for (Complex& z : dict.data()) {
    const double re = detail::read_f64(is, path);
    const double im = detail::read_f64(is, path);
    z = Complex(re, im);
  }
  return dict;
}

void write_coefs(const std::string& path, const CoefMatrix& coefs) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_coefs: cannot open " + path);
  os.write("SOUPCOE1", 8);
  detail::write_u32(os, static_cast<std::uint32_t>(coefs.signal_count()));
  detail::write_u32(os, static_cast<std::uint32_t>(coefs.atom_count()));
  for (std::size_t j = 0; j < coefs.atom_count(); ++j) {
    const SparseColumn& col = coefs.col(j);
    detail::write_u32(os, static_cast<std::uint32_t>(col.nnz()));
    for (std::size_t k = 0; k < col.nnz(); ++k) {
      detail::write_u32(os, static_cast<std::uint32_t>(col.support()[k]));
      detail::write_f64(os, col.values()[k].real());
      detail::write_f64(os, col.values()[k].imag());
    }
  }
  if (!os) throw IoError("write_coefs: write failed for " + path);
}

CoefMatrix read_coefs(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_coefs: cannot open " + path);
  detail::expect_magic(is, "SOUPCOE1", "read_coefs " + path);
  const std::uint32_t signal_count = detail::read_u32(is, path);
  const std::uint32_t atom_count = detail::read_u32(is, path);
  CoefMatrix coefs(signal_count, atom_count);
  for (std::uint32_t j = 0; j < atom_count; ++j) {
    const std::uint32_t count = detail::read_u32(is, path);
    SparseColumn col(signal_count);
    for (std::uint32_t k = 0; k < count; ++k) {
      const std::uint32_t idx = detail::read_u32(is, path);
      const double re = detail::read_f64(is, path);
      const double im = detail::read_f64(is, path);
      col.push_back(idx, Complex(re, im));
    }
    coefs.set_col(j, col);
  }
  return coefs;
}

void write_pgm(const std::string& path, const Image& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("write_pgm: cannot open " + path);
  os << "P5\n" << img.width << " " << img.height << "\n255\n";
  const double peak = peak_magnitude(img);
  const double scale = peak > 0.0 ? 255.0 / peak : 0.0;
  for (const Complex& z : img.pixels) {
    const auto v = static_cast<int>(std::lround(std::abs(z) * scale));
    os.put(static_cast<char>(std::min(255, std::max(0, v))));
  }
  if (!os) throw IoError("write_pgm: write failed for " + path);
}

namespace {

int next_pgm_token(std::istream& is, const std::string& path) {
  // Skips whitespace and '#' comment lines, then parses one integer.
  int c = is.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = is.get();
    } else if (std::isspace(c)) {
      c = is.get();
    } else {
      break;
    }
  }
  if (c == EOF) throw IoError("read_pgm: truncated header in " + path);
  int value = 0;
  bool any = false;
  while (c != EOF && std::isdigit(c)) {
    value = value * 10 + (c - '0');
    any = true;
    c = is.get();
  }
  if (!any) throw IoError("read_pgm: malformed header in " + path);
  return value;
}

}  // namespace

Image read_pgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_pgm: cannot open " + path);
  char magic[2];
  if (!is.read(magic, 2) || magic[0] != 'P' || magic[1] != '5')
    throw IoError("read_pgm: not a binary PGM (P5): " + path);
  const int width = next_pgm_token(is, path);
  const int height = next_pgm_token(is, path);
  const int maxval = next_pgm_token(is, path);
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
    throw IoError("read_pgm: unsupported PGM header in " + path);
  Image img(static_cast<std::size_t>(height), static_cast<std::size_t>(width));
  std::vector<unsigned char> raw(img.pixels.size());
  if (!is.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
    throw IoError("read_pgm: truncated pixel data in " + path);
  for (std::size_t i = 0; i < raw.size(); ++i)
    img.pixels[i] = Complex(static_cast<double>(raw[i]), 0.0);
  return img;
}

Image read_any_image(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw IoError("read image: cannot open " + path);
  char magic[8] = {0};
  probe.read(magic, 8);
  probe.close();
  if (magic[0] == 'P' && magic[1] == '5') return read_pgm(path);
  if (std::string(magic, 8) == "SOUPIMG1") return read_image(path);
  throw IoError("read image: unrecognized format in " + path);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
    // Destructor must not throw; explicit close() reports failures.
  }
}

void CsvWriter::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) buffer_ += ',';
    buffer_ += format_double(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::ofstream os(path_, std::ios::binary);
  if (!os) throw IoError("CsvWriter: cannot open " + path_);
  os.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
  if (!os) throw IoError("CsvWriter: write failed for " + path_);
}

}  // namespace soup
