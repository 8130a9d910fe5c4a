#pragma once

#include <string>
#include <vector>

#include "soup/coef_matrix.hpp"
#include "soup/dense_matrix.hpp"
#include "soup/image.hpp"

namespace soup {

// Complex image file: magic "SOUPIMG1", u32 height, u32 width, then
// height*width (re, im) f64 pairs row-major; little-endian.
void write_image(const std::string& path, const Image& img);
Image read_image(const std::string& path);

// Dense dictionary file: magic "SOUPDIC1", u32 rows, u32 cols, then
// rows*cols (re, im) f64 pairs column-major.
void write_dictionary(const std::string& path, const DenseMatrix& dict);
DenseMatrix read_dictionary(const std::string& path);

// Sparse coefficient file: magic "SOUPCOE1", u32 signal_count, u32
// atom_count, then per column: u32 count followed by count
// (u32 index, f64 re, f64 im) records.
void write_coefs(const std::string& path, const CoefMatrix& coefs);
CoefMatrix read_coefs(const std::string& path);

// 8-bit binary PGM (P5). Reading keeps the raw intensity values (0..maxval)
// as real pixels; writing stores pixel magnitudes scaled so the peak maps
// to 255.
void write_pgm(const std::string& path, const Image& img);
Image read_pgm(const std::string& path);

// Reads a PGM or SOUPIMG1 image based on the file's leading magic bytes.
Image read_any_image(const std::string& path);

// Minimal CSV writer; numeric cells are formatted with up to 17 significant
// digits so reruns are byte-comparable.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  ~CsvWriter();
  void row(const std::vector<double>& values);
  void close();

 private:
  std::string path_;
  std::string buffer_;
  bool closed_ = false;
};

std::string format_double(double v);

}  // namespace soup
