#pragma once

#include <cstdint>
#include <filesystem>

#include "copyloc/mat.hpp"

namespace copyloc {

enum class SimKind : std::uint8_t {
  raw_cosine = 0,   // temperature-scaled cosine, values in [-1/tau, 1/tau]
  dual_softmax = 1  // values in [0, 1]
};

// Query x reference grid of frame similarities. scale_q/scale_r convert
// cell indices to seconds (1.0 until the matrix is resized).
struct SimMatrix {
  SimKind kind = SimKind::raw_cosine;
  Mat values;  // q x r
  double scale_q = 1.0;
  double scale_r = 1.0;
  double tau = 1.0;  // temperature baked into raw_cosine values

  std::size_t rows() const { return values.rows(); }
  std::size_t cols() const { return values.cols(); }

  void validate() const;
};

// Binary grid, magic "VCS1" (header mirrors the feature format):
//   "VCS1" | u8 kind | u32 rows | u32 cols | f32 scale_q | f32 scale_r |
//   f32 tau | rows*cols little-endian f32
SimMatrix read_sim_matrix(const std::filesystem::path& path);
void write_sim_matrix(const std::filesystem::path& path, const SimMatrix& m);

// 8-bit binary PGM (P5), pixel = round(255 * clamp(value, 0, 1)).
// raw_cosine matrices are min-max scaled first and a comment line says so.
void write_pgm(const std::filesystem::path& path, const SimMatrix& m);

}  // namespace copyloc
