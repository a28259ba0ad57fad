#include <algorithm>
#include <vector>

#include "align_detail.hpp"

namespace copyloc {

// Binarize, label 8-connected components, box each component. A trained
// detection head would sit here; this keeps the same boxes-on-a-map
// interface deterministic.
std::vector<SegmentBox> cc_detect(const SimMatrix& s, const DetectorParams& p) {
  p.validate();
  if (s.kind != SimKind::dual_softmax)
    fail(Errc::wrong_kind, "cc_detect requires a dual_softmax matrix");
  s.validate();
  const Mat norm = minmax_normalize(s.values);
  const long q = static_cast<long>(norm.rows());
  const long r = static_cast<long>(norm.cols());

  std::vector<bool> mask(static_cast<std::size_t>(q) * r);
  for (long m = 0; m < q; ++m)
    for (long n = 0; n < r; ++n) mask[m * r + n] = norm(m, n) >= p.t_bin;

  std::vector<bool> seen(mask.size(), false);
  std::vector<long> stack;
  std::vector<SegmentBox> boxes;
  for (long m = 0; m < q; ++m) {
    for (long n = 0; n < r; ++n) {
      const std::size_t at = m * r + n;
      if (!mask[at] || seen[at]) continue;
      long m0 = m, m1 = m, n0 = n, n1 = n;
      double sum = 0.0;
      std::size_t count = 0;
      stack.assign(1, static_cast<long>(at));
      seen[at] = true;
      while (!stack.empty()) {
        const long cur = stack.back();
        stack.pop_back();
        const long cm = cur / r, cn = cur % r;
        m0 = std::min(m0, cm);
        m1 = std::max(m1, cm);
        n0 = std::min(n0, cn);
        n1 = std::max(n1, cn);
        sum += norm(cm, cn);
        ++count;
        for (long dm = -1; dm <= 1; ++dm)
          for (long dn = -1; dn <= 1; ++dn) {
            if (dm == 0 && dn == 0) continue;
            const long nm = cm + dm, nn = cn + dn;
            if (nm < 0 || nn < 0 || nm >= q || nn >= r) continue;
            const std::size_t nat = nm * r + nn;
            if (mask[nat] && !seen[nat]) {
              seen[nat] = true;
              stack.push_back(static_cast<long>(nat));
            }
          }
      }
      const long area = (m1 - m0 + 1) * (n1 - n0 + 1);
      const double score = sum / static_cast<double>(count);  // mean over component cells
      if (area < p.a_min || score < p.s_min) continue;
      boxes.push_back(detail::cells_to_box(m0, m1, n0, n1, s, score));
    }
  }
  return nms(std::move(boxes), p.nms_iou);
}

}  // namespace copyloc
