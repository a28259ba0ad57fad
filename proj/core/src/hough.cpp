#include <algorithm>
#include <map>

#include "align_detail.hpp"

namespace copyloc {

std::vector<SegmentBox> hough_voting(const SimMatrix& s, const DetectorParams& p) {
  p.validate();
  s.validate();
  const Mat norm = minmax_normalize(s.values);
  const long q = static_cast<long>(norm.rows());
  const long r = static_cast<long>(norm.cols());

  struct Cell {
    long m, n;
    double value;
  };
  // Offset d = n - m, binned into widths of bin_width. Cells arrive in
  // row-major order, so each bin's list is already sorted by m.
  std::map<long, std::vector<Cell>> bins;
  for (long m = 0; m < q; ++m)
    for (long n = 0; n < r; ++n) {
      const double v = norm(m, n);
      if (v < p.t_bin) continue;
      const long d = n - m;
      const long bin = (d >= 0) ? d / p.bin_width : -((-d + p.bin_width - 1) / p.bin_width);
      bins[bin].push_back({m, n, v});
    }

  std::vector<SegmentBox> boxes;
  for (const auto& [bin, cells] : bins) {
    if (static_cast<int>(cells.size()) < p.v_min) continue;
    // Split the peak's cells into runs at query gaps larger than `gap`.
    std::size_t start = 0;
    for (std::size_t i = 1; i <= cells.size(); ++i) {
      const bool split = i == cells.size() || cells[i].m - cells[i - 1].m > p.gap;
      if (!split) continue;
      long m0 = cells[start].m, m1 = cells[start].m;
      long n0 = cells[start].n, n1 = cells[start].n;
      double sum = 0.0;
      for (std::size_t k = start; k < i; ++k) {
        m0 = std::min(m0, cells[k].m);
        m1 = std::max(m1, cells[k].m);
        n0 = std::min(n0, cells[k].n);
        n1 = std::max(n1, cells[k].n);
        sum += cells[k].value;
      }
      const double score = sum / static_cast<double>(i - start);
      boxes.push_back(detail::cells_to_box(m0, m1, n0, n1, s, score));
      start = i;
    }
  }
  detail::sort_by_score(boxes);
  return boxes;
}

}  // namespace copyloc
