#pragma once

#include <string>
#include <vector>

#include "gsfpca/fpca.hpp"
#include "gsfpca/grid.hpp"

namespace gsfpca {

// Flat binary matrix: one ASCII header line "rows cols complex\n" followed by
// row-major little-endian float64 (re, im) pairs.
void write_matrix(const std::string& path, const CMat& m);
CMat read_matrix(const std::string& path);

// FieldSample: header "dim N complex\n", then the node values (row-major in
// 2D) as little-endian float64 pairs.
void write_field(const std::string& path, const FieldSample& f);
FieldSample read_field(const std::string& path);

// CSV with '.' decimals and ',' separators; one header row.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);
  ~CsvWriter();

 private:
  struct Impl;
  Impl* impl_;
};

std::string format_double(double v);

// 16-bit big-endian P5 PGM of the real parts, affinely scaled to the full
// range; the scale and offset go to a small ASCII sidecar next to the image.
void write_pgm16(const std::string& path, const FieldSample& f);

// Little-endian grayscale PFM of the real parts (raw floats).
void write_pfm(const std::string& path, const FieldSample& f);

// EigenModel persistence: <base>.bin holds a p x (m+1) matrix (column 0 the
// mean, then the eigenvectors); <base>.txt is an ASCII sidecar with n, p, m,
// sigma_tilde, total_variance and the eigenvalues as CSV.
void save_eigenmodel(const std::string& base_path, const EigenModel& model);
EigenModel load_eigenmodel(const std::string& base_path);

}  // namespace gsfpca
