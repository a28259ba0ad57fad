#include <algorithm>
#include <limits>

#include "align_detail.hpp"

namespace copyloc {

// Local-alignment subsequence DTW. Costs c = 1 - similarity are shifted
// by -(1 - s_min), so a path's shifted total D is <= 0 exactly when its
// mean cost is <= 1 - s_min; paths start wherever that is worthwhile
// instead of accumulating junk prefixes from the matrix border.
std::vector<SegmentBox> dtw_align(const SimMatrix& s, const DetectorParams& p) {
  p.validate();
  s.validate();
  const Mat norm = minmax_normalize(s.values);
  const long q = static_cast<long>(norm.rows());
  const long r = static_cast<long>(norm.cols());
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<bool> suppressed(static_cast<std::size_t>(q) * r, false);
  Mat dist(norm.rows(), norm.cols());
  std::vector<long> path_len(static_cast<std::size_t>(q) * r, 0);
  enum Step : unsigned char { fresh = 0, diag, up, left };
  std::vector<unsigned char> step(static_cast<std::size_t>(q) * r, fresh);

  std::vector<SegmentBox> boxes;
  while (true) {
    long end_m = -1, end_n = -1;
    double end_d = inf;
    for (long m = 0; m < q; ++m)
      for (long n = 0; n < r; ++n) {
        const std::size_t at = m * r + n;
        if (suppressed[at]) {
          dist(m, n) = inf;
          path_len[at] = 0;
          continue;
        }
        double carry = inf;
        Step how = fresh;
        if (m > 0 && n > 0 && dist(m - 1, n - 1) < carry) {
          carry = dist(m - 1, n - 1);
          how = diag;
        }
        if (m > 0 && dist(m - 1, n) < carry) {
          carry = dist(m - 1, n);
          how = up;
        }
        if (n > 0 && dist(m, n - 1) < carry) {
          carry = dist(m, n - 1);
          how = left;
        }
        if (0.0 < carry) {
          carry = 0.0;
          how = fresh;
        }
        const double shifted_cost = p.s_min - norm(m, n);  // (1-N) - (1-s_min)
        dist(m, n) = shifted_cost + carry;
        step[at] = how;
        path_len[at] = how == fresh ? 1 : path_len[(how == diag)   ? (m - 1) * r + (n - 1)
                                                   : (how == up)   ? (m - 1) * r + n
                                                                   : m * r + (n - 1)] +
                                             1;
        if (path_len[at] >= p.l_min && dist(m, n) <= 0.0 && dist(m, n) < end_d) {
          end_d = dist(m, n);
          end_m = m;
          end_n = n;
        }
      }
    if (end_m < 0) break;

    long m = end_m, n = end_n;
    long m0 = m, m1 = m, n0 = n, n1 = n;
    while (true) {
      m0 = std::min(m0, m);
      m1 = std::max(m1, m);
      n0 = std::min(n0, n);
      n1 = std::max(n1, n);
      const Step how = static_cast<Step>(step[m * r + n]);
      if (how == fresh) break;
      if (how == diag) {
        --m;
        --n;
      } else if (how == up) {
        --m;
      } else {
        --n;
      }
    }
    const double len = static_cast<double>(path_len[end_m * r + end_n]);
    const double score = p.s_min - end_d / len;  // = 1 - mean path cost
    boxes.push_back(detail::cells_to_box(m0, m1, n0, n1, s, score));
    for (long mm = m0; mm <= m1; ++mm)
      for (long nn = n0; nn <= n1; ++nn) suppressed[mm * r + nn] = true;
  }
  detail::sort_by_score(boxes);
  return boxes;
}

}  // namespace copyloc
