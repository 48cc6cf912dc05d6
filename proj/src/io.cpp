#include "gsfpca/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gsfpca {

namespace {

void write_pairs(std::ofstream& out, const Complex* data, std::int64_t count) {
  // little-endian host assumed (x86/aarch64); values are plain float64 pairs
  std::vector<double> buf(2 * static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    buf[2 * i] = data[i].real();
    buf[2 * i + 1] = data[i].imag();
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(double)));
}

void read_pairs(std::ifstream& in, Complex* data, std::int64_t count) {
  std::vector<double> buf(2 * static_cast<std::size_t>(count));
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (!in) throw std::runtime_error("binary payload truncated");
  for (std::int64_t i = 0; i < count; ++i) data[i] = Complex(buf[2 * i], buf[2 * i + 1]);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

}  // namespace

void write_matrix(const std::string& path, const CMat& m) {
  auto out = open_out(path);
  out << m.rows() << " " << m.cols() << " complex\n";
  // row-major payload
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    CVec row = m.row(r).transpose();
    write_pairs(out, row.data(), row.size());
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

CMat read_matrix(const std::string& path) {
  auto in = open_in(path);
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::int64_t rows = 0, cols = 0;
  std::string tag;
  if (!(hs >> rows >> cols >> tag) || tag != "complex" || rows < 0 || cols < 0)
    throw std::runtime_error("bad matrix header in " + path);
  CMat m(rows, cols);
  CVec row(cols);
  for (std::int64_t r = 0; r < rows; ++r) {
    read_pairs(in, row.data(), cols);
    m.row(r) = row.transpose();
  }
  return m;
}

void write_field(const std::string& path, const FieldSample& f) {
  auto out = open_out(path);
  out << f.grid.dim << " " << f.grid.resolution << " complex\n";
  write_pairs(out, f.values.data(), f.values.size());
  if (!out) throw std::runtime_error("write failed: " + path);
}

FieldSample read_field(const std::string& path) {
  auto in = open_in(path);
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  int dim = 0;
  std::int64_t n = 0;
  std::string tag;
  if (!(hs >> dim >> n >> tag) || tag != "complex")
    throw std::runtime_error("bad field header in " + path);
  const Grid grid = make_grid(dim, n);
  CVec values(n);
  read_pairs(in, values.data(), n);
  return make_field(grid, std::move(values));
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : impl_(new Impl{std::ofstream(path)}) {
  if (!impl_->out) {
    delete impl_;
    throw std::runtime_error("cannot open for writing: " + path);
  }
  for (std::size_t i = 0; i < columns.size(); ++i)
    impl_->out << columns[i] << (i + 1 < columns.size() ? "," : "");
  impl_->out << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i)
    impl_->out << cells[i] << (i + 1 < cells.size() ? "," : "");
  impl_->out << "\n";
}

void CsvWriter::row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

CsvWriter::~CsvWriter() { delete impl_; }

std::string format_double(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(12);
  os << v;
  return os.str();
}

void write_pgm16(const std::string& path, const FieldSample& f) {
  if (f.grid.dim != 2) throw std::invalid_argument("write_pgm16: 2D field required");
  const auto na = f.grid.axis_points;
  double lo = f.values[0].real(), hi = lo;
  for (Eigen::Index i = 0; i < f.values.size(); ++i) {
    lo = std::min(lo, f.values[i].real());
    hi = std::max(hi, f.values[i].real());
  }
  const double span = (hi > lo) ? hi - lo : 1.0;
  auto out = open_out(path);
  out << "P5\n" << na << " " << na << "\n65535\n";
  std::vector<unsigned char> row(2 * static_cast<std::size_t>(na));
  for (std::int64_t y = 0; y < na; ++y) {
    for (std::int64_t x = 0; x < na; ++x) {
      const double v = (f.values[y * na + x].real() - lo) / span;
      const auto q = static_cast<std::uint16_t>(std::lround(v * 65535.0));
      row[2 * x] = static_cast<unsigned char>(q >> 8);
      row[2 * x + 1] = static_cast<unsigned char>(q & 0xff);
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  std::ofstream side(path + ".scale");
  side << "offset " << format_double(lo) << "\nscale " << format_double(span / 65535.0) << "\n";
}

void write_pfm(const std::string& path, const FieldSample& f) {
  if (f.grid.dim != 2) throw std::invalid_argument("write_pfm: 2D field required");
  const auto na = f.grid.axis_points;
  auto out = open_out(path);
  out << "Pf\n" << na << " " << na << "\n-1.0\n";  // negative: little-endian
  std::vector<float> row(static_cast<std::size_t>(na));
  // PFM stores rows bottom-up
  for (std::int64_t y = na - 1; y >= 0; --y) {
    for (std::int64_t x = 0; x < na; ++x)
      row[static_cast<std::size_t>(x)] = static_cast<float>(f.values[y * na + x].real());
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
}

void save_eigenmodel(const std::string& base_path, const EigenModel& model) {
  CMat packed(model.p(), model.m() + 1);
  packed.col(0) = model.mean;
  packed.rightCols(model.m()) = model.eigvecs;
  write_matrix(base_path + ".bin", packed);
  std::ofstream side(base_path + ".txt");
  if (!side) throw std::runtime_error("cannot open for writing: " + base_path + ".txt");
  side << "n " << model.n << "\n";
  side << "p " << model.p() << "\n";
  side << "m " << model.m() << "\n";
  side << "sigma_tilde " << format_double(model.noise_sigma_tilde) << "\n";
  side << "total_variance " << format_double(model.total_variance) << "\n";
  side << "eigenvalues ";
  for (Eigen::Index j = 0; j < model.m(); ++j)
    side << format_double(model.eigvals[j]) << (j + 1 < model.m() ? "," : "");
  side << "\n";
}

EigenModel load_eigenmodel(const std::string& base_path) {
  const CMat packed = read_matrix(base_path + ".bin");
  std::ifstream side(base_path + ".txt");
  if (!side) throw std::runtime_error("cannot open for reading: " + base_path + ".txt");
  EigenModel model;
  std::string key;
  std::int64_t p = 0, m = 0;
  while (side >> key) {
    if (key == "n") side >> model.n;
    else if (key == "p") side >> p;
    else if (key == "m") side >> m;
    else if (key == "sigma_tilde") side >> model.noise_sigma_tilde;
    else if (key == "total_variance") side >> model.total_variance;
    else if (key == "eigenvalues") {
      std::string csv;
      side >> csv;
      model.eigvals.resize(m);
      std::istringstream cs(csv);
      std::string item;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (!std::getline(cs, item, ',')) throw std::runtime_error("eigenvalue list truncated");
        model.eigvals[j] = std::stod(item);
      }
    } else {
      std::string rest;
      std::getline(side, rest);
    }
  }
  if (p != packed.rows() || m + 1 != packed.cols())
    throw std::runtime_error("eigenmodel sidecar does not match binary payload");
  model.mean = packed.col(0);
  model.eigvecs = packed.rightCols(m);
  return model;
}

}  // namespace gsfpca
