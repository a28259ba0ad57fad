#include "copyloc/similarity.hpp"

#include <algorithm>
#include <cmath>

namespace copyloc {

SimMatrix cosine_matrix(const Mat& query_frames, const Mat& ref_frames, double tau) {
  if (tau <= 0.0) fail(Errc::bad_argument, "tau must be positive");
  if (query_frames.cols() != ref_frames.cols())
    fail(Errc::dim_mismatch, "query/reference feature dims differ");
  const Mat q = l2_normalize_rows(query_frames);
  const Mat r = l2_normalize_rows(ref_frames);

  SimMatrix s;
  s.kind = SimKind::raw_cosine;
  s.tau = tau;
  s.values = Mat(q.rows(), r.rows());
  for (std::size_t m = 0; m < q.rows(); ++m) {
    const auto qm = q.row(m);
    for (std::size_t n = 0; n < r.rows(); ++n) {
      const double c = std::clamp(dot(qm, r.row(n)), -1.0, 1.0);
      s.values(m, n) = c / tau;
    }
  }
  return s;
}

SimMatrix cosine_matrix(const EnhancedPair& enhanced, double tau) {
  if (enhanced.query.rows() < 2 || enhanced.ref.rows() < 2)
    fail(Errc::invariant_violation, "enhanced pair needs at least one frame row");
  const std::size_t d = enhanced.query.cols();
  Mat q(enhanced.query.rows() - 1, d);
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j) q(i, j) = enhanced.query(i + 1, j);
  Mat r(enhanced.ref.rows() - 1, d);
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < d; ++j) r(i, j) = enhanced.ref(i + 1, j);
  return cosine_matrix(q, r, tau);
}

SimMatrix dual_softmax(const SimMatrix& raw) {
  raw.validate();
  const Mat& s = raw.values;
  const std::size_t q = s.rows();
  const std::size_t r = s.cols();

  Mat row_sm(q, r);
  for (std::size_t m = 0; m < q; ++m) {
    double hi = s(m, 0);
    for (std::size_t n = 1; n < r; ++n) hi = std::max(hi, s(m, n));
    double denom = 0.0;
    for (std::size_t n = 0; n < r; ++n) {
      row_sm(m, n) = std::exp(s(m, n) - hi);
      denom += row_sm(m, n);
    }
    for (std::size_t n = 0; n < r; ++n) row_sm(m, n) /= denom;
  }

  SimMatrix out;
  out.kind = SimKind::dual_softmax;
  out.scale_q = raw.scale_q;
  out.scale_r = raw.scale_r;
  out.values = Mat(q, r);
  for (std::size_t n = 0; n < r; ++n) {
    double hi = s(0, n);
    for (std::size_t m = 1; m < q; ++m) hi = std::max(hi, s(m, n));
    double denom = 0.0;
    for (std::size_t m = 0; m < q; ++m) denom += std::exp(s(m, n) - hi);
    for (std::size_t m = 0; m < q; ++m)
      out.values(m, n) = row_sm(m, n) * (std::exp(s(m, n) - hi) / denom);
  }
  return out;
}

SimMatrix resize_bilinear(const SimMatrix& src, std::size_t target_rows, std::size_t target_cols) {
  if (target_rows == 0 || target_cols == 0) fail(Errc::empty_target, "resize target has zero size");
  src.validate();
  const Mat& in = src.values;

  SimMatrix out;
  out.kind = src.kind;
  out.tau = src.tau;
  out.scale_q = src.scale_q * static_cast<double>(in.rows()) / static_cast<double>(target_rows);
  out.scale_r = src.scale_r * static_cast<double>(in.cols()) / static_cast<double>(target_cols);
  out.values = Mat(target_rows, target_cols);

  const double row_ratio = static_cast<double>(in.rows()) / static_cast<double>(target_rows);
  const double col_ratio = static_cast<double>(in.cols()) / static_cast<double>(target_cols);
  for (std::size_t i = 0; i < target_rows; ++i) {
    double sy = (static_cast<double>(i) + 0.5) * row_ratio - 0.5;
    sy = std::clamp(sy, 0.0, static_cast<double>(in.rows() - 1));
    const std::size_t y0 = static_cast<std::size_t>(sy);
    const std::size_t y1 = std::min(y0 + 1, in.rows() - 1);
    const double fy = sy - static_cast<double>(y0);
    for (std::size_t j = 0; j < target_cols; ++j) {
      double sx = (static_cast<double>(j) + 0.5) * col_ratio - 0.5;
      sx = std::clamp(sx, 0.0, static_cast<double>(in.cols() - 1));
      const std::size_t x0 = static_cast<std::size_t>(sx);
      const std::size_t x1 = std::min(x0 + 1, in.cols() - 1);
      const double fx = sx - static_cast<double>(x0);
      const double top = in(y0, x0) * (1.0 - fx) + in(y0, x1) * fx;
      const double bot = in(y1, x0) * (1.0 - fx) + in(y1, x1) * fx;
      out.values(i, j) = top * (1.0 - fy) + bot * fy;
    }
  }
  return out;
}

}  // namespace copyloc
