#include "copyloc/mat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace copyloc {

bool Mat::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double Mat::min_value() const {
  return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

double Mat::max_value() const {
  return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows())
    fail(Errc::dim_mismatch, "matmul: " + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()));
  Mat c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto brow = b.row(k);
      auto crow = c.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

Mat transpose(const Mat& m) {
  Mat t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

Mat l2_normalize_rows(const Mat& m) {
  Mat out = m;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double n = l2_norm(m.row(i));
    if (n == 0.0) fail(Errc::zero_vector, "row " + std::to_string(i) + " has zero norm");
    auto r = out.row(i);
    for (double& v : r) v /= n;
  }
  return out;
}

}  // namespace copyloc
