#include "copyloc/sim_matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace copyloc {

namespace {

constexpr char kMagic[4] = {'V', 'C', 'S', '1'};

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

void write_f32(std::ostream& os, float f) {
  write_u32(os, std::bit_cast<std::uint32_t>(f));
}

std::uint32_t read_u32(std::istream& is, const std::string& what) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) fail(Errc::truncated_file, what);
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
         std::uint32_t(b[3]) << 24;
}

float read_f32(std::istream& is, const std::string& what) {
  return std::bit_cast<float>(read_u32(is, what));
}

}  // namespace

void SimMatrix::validate() const {
  if (values.empty()) fail(Errc::invariant_violation, "similarity matrix is empty");
  if (!values.all_finite()) fail(Errc::nonfinite_value, "similarity matrix has non-finite entry");
  if (scale_q <= 0.0 || scale_r <= 0.0)
    fail(Errc::invariant_violation, "similarity scale factors must be positive");
  const double lo = values.min_value();
  const double hi = values.max_value();
  if (kind == SimKind::dual_softmax) {
    if (lo < -1e-12 || hi > 1.0 + 1e-12)
      fail(Errc::invariant_violation, "dual_softmax values outside [0,1]");
  } else {
    if (tau <= 0.0) fail(Errc::invariant_violation, "raw_cosine matrix needs tau > 0");
    const double bound = 1.0 / tau + 1e-9;
    if (lo < -bound || hi > bound)
      fail(Errc::invariant_violation, "raw_cosine values outside [-1/tau, 1/tau]");
  }
}

SimMatrix read_sim_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(Errc::io_error, "cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4)) fail(Errc::truncated_file, "magic in " + path.string());
  if (std::memcmp(magic, kMagic, 4) != 0)
    fail(Errc::bad_magic, path.string() + " does not start with VCS1");
  char kind = 0;
  if (!is.read(&kind, 1)) fail(Errc::truncated_file, "kind byte in " + path.string());
  if (kind != 0 && kind != 1) fail(Errc::wrong_kind, "unknown similarity kind in " + path.string());

  SimMatrix m;
  m.kind = static_cast<SimKind>(kind);
  const std::uint32_t rows = read_u32(is, "rows in " + path.string());
  const std::uint32_t cols = read_u32(is, "cols in " + path.string());
  m.scale_q = read_f32(is, "scale_q in " + path.string());
  m.scale_r = read_f32(is, "scale_r in " + path.string());
  m.tau = read_f32(is, "tau in " + path.string());
  m.values = Mat(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      m.values(i, j) = read_f32(is, path.string() + " cell data");
  m.validate();
  return m;
}

void write_sim_matrix(const std::filesystem::path& path, const SimMatrix& m) {
  m.validate();
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  os.write(kMagic, 4);
  const char kind = static_cast<char>(m.kind);
  os.write(&kind, 1);
  write_u32(os, static_cast<std::uint32_t>(m.rows()));
  write_u32(os, static_cast<std::uint32_t>(m.cols()));
  write_f32(os, static_cast<float>(m.scale_q));
  write_f32(os, static_cast<float>(m.scale_r));
  write_f32(os, static_cast<float>(m.tau));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) write_f32(os, static_cast<float>(m.values(i, j)));
  if (!os) fail(Errc::io_error, "short write to " + path.string());
}

void write_pgm(const std::filesystem::path& path, const SimMatrix& m) {
  m.validate();
  Mat img = m.values;
  std::string comment;
  if (m.kind == SimKind::raw_cosine) {
    const double lo = img.min_value();
    const double hi = img.max_value();
    const double span = hi > lo ? hi - lo : 1.0;
    for (double& v : img.data()) v = (v - lo) / span;
    comment = "# raw_cosine min-max scaled from [" + std::to_string(lo) + ", " +
              std::to_string(hi) + "]\n";
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  os << "P5\n" << comment << m.cols() << " " << m.rows() << "\n255\n";
  std::vector<unsigned char> row(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double v = std::clamp(img(i, j), 0.0, 1.0);
      row[j] = static_cast<unsigned char>(std::lround(255.0 * v));
    }
    os.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!os) fail(Errc::io_error, "short write to " + path.string());
}

}  // namespace copyloc
