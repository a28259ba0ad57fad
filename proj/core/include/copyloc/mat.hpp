#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "copyloc/error.hpp"

namespace copyloc {

// Dense row-major double matrix. All pipeline math runs in double;
// file formats convert to/from little-endian f32 at the boundary.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool all_finite() const;
  double min_value() const;
  double max_value() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// c = a * b, naive ikj loop. Shapes checked.
Mat matmul(const Mat& a, const Mat& b);

Mat transpose(const Mat& m);

// Rows scaled to unit L2 norm. Throws zero_vector on a zero row.
Mat l2_normalize_rows(const Mat& m);

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> v);

}  // namespace copyloc
