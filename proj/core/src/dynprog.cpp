#include <algorithm>

#include "align_detail.hpp"

namespace copyloc {

// score(m,n) = max(0, S[m,n] + max(diag, up - penalty, left - penalty));
// chains are traced back from local maxima in descending score order.
std::vector<SegmentBox> dyn_prog(const SimMatrix& s, const DetectorParams& p) {
  p.validate();
  s.validate();
  const Mat norm = minmax_normalize(s.values);
  const long q = static_cast<long>(norm.rows());
  const long r = static_cast<long>(norm.cols());

  enum Step : unsigned char { none = 0, diag, up, left };
  Mat score(norm.rows(), norm.cols());
  std::vector<unsigned char> step(static_cast<std::size_t>(q) * r, none);
  for (long m = 0; m < q; ++m)
    for (long n = 0; n < r; ++n) {
      double carry = 0.0;
      Step how = none;
      if (m > 0 && n > 0 && score(m - 1, n - 1) > carry) {
        carry = score(m - 1, n - 1);
        how = diag;
      }
      if (m > 0 && score(m - 1, n) - p.dp_gap_penalty > carry) {
        carry = score(m - 1, n) - p.dp_gap_penalty;
        how = up;
      }
      if (n > 0 && score(m, n - 1) - p.dp_gap_penalty > carry) {
        carry = score(m, n - 1) - p.dp_gap_penalty;
        how = left;
      }
      const double v = norm(m, n) + carry;
      score(m, n) = std::max(0.0, v);
      step[m * r + n] = (v > 0.0) ? how : none;
    }

  // Local maxima above the chain-weight floor, strongest first.
  struct Cand {
    double s;
    long m, n;
  };
  std::vector<Cand> cands;
  const double floor = static_cast<double>(p.l_min) * p.s_min;
  for (long m = 0; m < q; ++m)
    for (long n = 0; n < r; ++n) {
      const double v = score(m, n);
      if (v <= floor) continue;
      bool is_max = true;
      for (long dm = -1; dm <= 1 && is_max; ++dm)
        for (long dn = -1; dn <= 1; ++dn) {
          if (dm == 0 && dn == 0) continue;
          const long mm = m + dm, nn = n + dn;
          if (mm < 0 || nn < 0 || mm >= q || nn >= r) continue;
          if (score(mm, nn) > v) {
            is_max = false;
            break;
          }
        }
      if (is_max) cands.push_back({v, m, n});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.s != b.s) return a.s > b.s;
    if (a.m != b.m) return a.m < b.m;
    return a.n < b.n;
  });

  std::vector<bool> visited(static_cast<std::size_t>(q) * r, false);
  std::vector<SegmentBox> boxes;
  struct ChainCell {
    long m, n;
    double value;
  };
  std::vector<ChainCell> chain;
  for (const Cand& c : cands) {
    if (visited[c.m * r + c.n]) continue;
    long m = c.m, n = c.n;
    chain.clear();
    while (true) {
      visited[m * r + n] = true;
      chain.push_back({m, n, norm(m, n)});
      const Step how = static_cast<Step>(step[m * r + n]);
      if (how == none) break;
      if (how == diag) {
        --m;
        --n;
      } else if (how == up) {
        --m;
      } else {
        --n;
      }
      if (visited[m * r + n]) break;
    }
    // Weak cells at either end are only path padding; drop them so the
    // box hugs the similar core (diagonal steps through near-zero cells
    // cost nothing in the recurrence and would otherwise stretch it).
    std::size_t lo = 0, hi = chain.size();
    while (lo < hi && chain[lo].value < p.s_min) ++lo;
    while (hi > lo && chain[hi - 1].value < p.s_min) --hi;
    if (hi - lo < static_cast<std::size_t>(p.l_min)) continue;
    long m0 = chain[lo].m, m1 = chain[lo].m, n0 = chain[lo].n, n1 = chain[lo].n;
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      m0 = std::min(m0, chain[i].m);
      m1 = std::max(m1, chain[i].m);
      n0 = std::min(n0, chain[i].n);
      n1 = std::max(n1, chain[i].n);
      sum += chain[i].value;
    }
    const double mean = sum / static_cast<double>(hi - lo);
    if (mean < p.s_min) continue;
    boxes.push_back(detail::cells_to_box(m0, m1, n0, n1, s, mean));
  }
  detail::sort_by_score(boxes);
  return boxes;
}

}  // namespace copyloc
