#include <algorithm>

#include "align_detail.hpp"

namespace copyloc {

// Maximum-weight paths are peeled off one at a time. Lexicographic node
// order is a topological order because edges strictly increase both
// coordinates, so one forward sweep per extraction suffices.
std::vector<SegmentBox> temporal_network(const SimMatrix& s, const DetectorParams& p) {
  p.validate();
  s.validate();
  const Mat norm = minmax_normalize(s.values);
  const long q = static_cast<long>(norm.rows());
  const long r = static_cast<long>(norm.cols());

  struct Node {
    long m, n;
    double value;
  };
  std::vector<Node> nodes;
  std::vector<long> grid(static_cast<std::size_t>(q) * r, -1);  // cell -> node index
  for (long m = 0; m < q; ++m)
    for (long n = 0; n < r; ++n)
      if (norm(m, n) >= p.t_node) {
        grid[m * r + n] = static_cast<long>(nodes.size());
        nodes.push_back({m, n, norm(m, n)});
      }

  std::vector<bool> dead(nodes.size(), false);
  std::vector<double> best(nodes.size());
  std::vector<long> pred(nodes.size());
  const double min_weight = static_cast<double>(p.l_min) * p.s_min;

  std::vector<SegmentBox> boxes;
  while (true) {
    long best_end = -1;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (dead[i]) continue;
      best[i] = nodes[i].value;
      pred[i] = -1;
      for (long dm = -p.gap; dm < 0; ++dm) {
        const long mj = nodes[i].m + dm;
        if (mj < 0) continue;
        for (long dn = -p.gap; dn < 0; ++dn) {
          const long nj = nodes[i].n + dn;
          if (nj < 0) continue;
          const long j = grid[mj * r + nj];
          if (j < 0 || dead[j]) continue;
          const double cand = nodes[i].value + best[j];
          if (cand > best[i]) {
            best[i] = cand;
            pred[i] = j;
          }
        }
      }
      if (best_end < 0 || best[i] > best[best_end]) best_end = static_cast<long>(i);
    }
    if (best_end < 0 || best[best_end] < min_weight) break;

    long m0 = nodes[best_end].m, m1 = m0, n0 = nodes[best_end].n, n1 = n0;
    double weight = 0.0;
    std::size_t length = 0;
    for (long i = best_end; i >= 0; i = pred[i]) {
      m0 = std::min(m0, nodes[i].m);
      m1 = std::max(m1, nodes[i].m);
      n0 = std::min(n0, nodes[i].n);
      n1 = std::max(n1, nodes[i].n);
      weight += nodes[i].value;
      ++length;
      dead[i] = true;
    }
    boxes.push_back(detail::cells_to_box(m0, m1, n0, n1, s, weight / static_cast<double>(length)));
  }
  detail::sort_by_score(boxes);
  return boxes;
}

}  // namespace copyloc
