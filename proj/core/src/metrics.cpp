#include "copyloc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace copyloc {

namespace {

// Compressed grid over the q/r breakpoints of both box sets; each cell is
// either fully inside or fully outside every box.
struct CompressedGrid {
  std::vector<double> qs, rs;

  explicit CompressedGrid(std::initializer_list<std::span<const SegmentBox>> sets) {
    for (const auto& boxes : sets)
      for (const auto& b : boxes) {
        qs.push_back(b.ts_q);
        qs.push_back(b.te_q);
        rs.push_back(b.ts_r);
        rs.push_back(b.te_r);
      }
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  }

  static bool covers(std::span<const SegmentBox> boxes, double qm, double rm) {
    return std::any_of(boxes.begin(), boxes.end(), [&](const SegmentBox& b) {
      return b.ts_q <= qm && qm < b.te_q && b.ts_r <= rm && rm < b.te_r;
    });
  }
};

}  // namespace

double region_union_area(std::span<const SegmentBox> boxes) {
  if (boxes.empty()) return 0.0;
  CompressedGrid grid({boxes});
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < grid.qs.size(); ++i)
    for (std::size_t j = 0; j + 1 < grid.rs.size(); ++j) {
      const double qm = 0.5 * (grid.qs[i] + grid.qs[i + 1]);
      const double rm = 0.5 * (grid.rs[j] + grid.rs[j + 1]);
      if (CompressedGrid::covers(boxes, qm, rm))
        area += (grid.qs[i + 1] - grid.qs[i]) * (grid.rs[j + 1] - grid.rs[j]);
    }
  return area;
}

double region_overlap_area(std::span<const SegmentBox> a, std::span<const SegmentBox> b) {
  if (a.empty() || b.empty()) return 0.0;
  CompressedGrid grid({a, b});
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < grid.qs.size(); ++i)
    for (std::size_t j = 0; j + 1 < grid.rs.size(); ++j) {
      const double qm = 0.5 * (grid.qs[i] + grid.qs[i + 1]);
      const double rm = 0.5 * (grid.rs[j] + grid.rs[j + 1]);
      if (CompressedGrid::covers(a, qm, rm) && CompressedGrid::covers(b, qm, rm))
        area += (grid.qs[i + 1] - grid.qs[i]) * (grid.rs[j + 1] - grid.rs[j]);
    }
  return area;
}

std::optional<double> PairMetrics::recall() const {
  if (gt_area == 0.0 && pred_area == 0.0) return 1.0;
  if (gt_area == 0.0) return std::nullopt;
  return overlap_area / gt_area;
}

std::optional<double> PairMetrics::precision() const {
  if (pred_area == 0.0 && gt_area == 0.0) return 1.0;
  if (pred_area == 0.0) return std::nullopt;
  return overlap_area / pred_area;
}

PairMetrics pair_segment_metrics(std::span<const SegmentBox> preds,
                                 std::span<const SegmentBox> gts) {
  PairMetrics m;
  m.gt_area = region_union_area(gts);
  m.pred_area = region_union_area(preds);
  m.overlap_area = region_overlap_area(preds, gts);
  return m;
}

double fscore_of(double recall, double precision) {
  const double sum = recall + precision;
  return sum > 0.0 ? 2.0 * recall * precision / sum : 0.0;
}

namespace {

struct Accumulator {
  double overlap = 0.0, gt = 0.0, pred = 0.0;
  double macro_r = 0.0, macro_p = 0.0;
  std::size_t n_r = 0, n_p = 0, n = 0;

  void add(const PairMetrics& m) {
    overlap += m.overlap_area;
    gt += m.gt_area;
    pred += m.pred_area;
    if (auto r = m.recall()) {
      macro_r += *r;
      ++n_r;
    }
    if (auto p = m.precision()) {
      macro_p += *p;
      ++n_p;
    }
    ++n;
  }

  double micro_recall() const { return gt > 0.0 ? overlap / gt : (pred > 0.0 ? 0.0 : 1.0); }
  double micro_precision() const { return pred > 0.0 ? overlap / pred : (gt > 0.0 ? 0.0 : 1.0); }
};

std::string ratio_bucket(double copied, double avg_len) {
  if (avg_len <= 0.0) return "ratio_unknown";
  const double pct = 100.0 * copied / avg_len;
  if (pct <= 20.0) return "ratio_0_20";
  if (pct <= 40.0) return "ratio_20_40";
  if (pct <= 60.0) return "ratio_40_60";
  if (pct <= 80.0) return "ratio_60_80";
  return "ratio_80_100";
}

}  // namespace

MetricsReport dataset_metrics(const std::vector<PairEvalInput>& pairs) {
  if (pairs.empty()) fail(Errc::empty_dataset, "dataset_metrics needs at least one pair");

  Accumulator all;
  std::map<std::string, Accumulator> groups;
  std::size_t positives = 0;
  for (const auto& pair : pairs) {
    const PairMetrics m = pair_segment_metrics(pair.predictions, pair.annotation.gt_boxes);
    all.add(m);
    if (pair.annotation.is_positive()) ++positives;

    std::vector<std::string> tags = pair.annotation.group_tags;
    if (pair.query_len && pair.ref_len && !pair.annotation.gt_boxes.empty()) {
      // Copy duration = average of the query- and reference-side union
      // lengths, bucketed against the average video length.
      std::vector<SegmentBox> gt = pair.annotation.gt_boxes;
      double q_len = 0.0, r_len = 0.0;
      {
        std::vector<std::pair<double, double>> qi, ri;
        for (const auto& b : gt) {
          qi.emplace_back(b.ts_q, b.te_q);
          ri.emplace_back(b.ts_r, b.te_r);
        }
        auto union_len = [](std::vector<std::pair<double, double>> iv) {
          std::sort(iv.begin(), iv.end());
          double total = 0.0, hi = -1.0;
          for (auto [a, b] : iv) {
            if (a > hi) {
              total += b - a;
              hi = b;
            } else if (b > hi) {
              total += b - hi;
              hi = b;
            }
          }
          return total;
        };
        q_len = union_len(qi);
        r_len = union_len(ri);
      }
      tags.push_back(ratio_bucket(0.5 * (q_len + r_len), 0.5 * (*pair.query_len + *pair.ref_len)));
    }
    for (const auto& tag : tags) groups[tag].add(m);
  }

  MetricsReport rep;
  rep.pair_count = pairs.size();
  rep.positive_pair_count = positives;
  rep.recall = all.micro_recall();
  rep.precision = all.micro_precision();
  rep.fscore = fscore_of(rep.recall, rep.precision);
  rep.macro_recall = all.n_r ? all.macro_r / static_cast<double>(all.n_r) : 0.0;
  rep.macro_precision = all.n_p ? all.macro_p / static_cast<double>(all.n_p) : 0.0;
  rep.macro_fscore = fscore_of(rep.macro_recall, rep.macro_precision);
  for (const auto& [tag, acc] : groups) {
    GroupStats g;
    g.recall = acc.micro_recall();
    g.precision = acc.micro_precision();
    g.fscore = fscore_of(g.recall, g.precision);
    g.pair_count = acc.n;
    rep.per_group[tag] = g;
  }
  return rep;
}

VideoLevelMetrics video_level_metrics(const std::vector<bool>& predicted_copied,
                                      const std::vector<bool>& labels) {
  if (predicted_copied.size() != labels.size())
    fail(Errc::length_mismatch, "video_level_metrics: decision/label counts differ");
  VideoLevelMetrics vm;
  std::size_t false_rejects = 0, false_accepts = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) {
      ++vm.positives;
      if (!predicted_copied[i]) ++false_rejects;
    } else {
      ++vm.negatives;
      if (predicted_copied[i]) ++false_accepts;
    }
  }
  if (vm.positives) vm.frr = static_cast<double>(false_rejects) / static_cast<double>(vm.positives);
  if (vm.negatives) vm.far = static_cast<double>(false_accepts) / static_cast<double>(vm.negatives);
  return vm;
}

std::string MetricsReport::to_json() const {
  nlohmann::json j;
  j["pair_count"] = pair_count;
  j["positive_pair_count"] = positive_pair_count;
  j["micro"] = {{"recall", recall}, {"precision", precision}, {"fscore", fscore}};
  j["macro"] = {{"recall", macro_recall}, {"precision", macro_precision}, {"fscore", macro_fscore}};
  if (frr) j["frr"] = *frr;
  if (far) j["far"] = *far;
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& [tag, g] : per_group)
    groups[tag] = {{"recall", g.recall}, {"precision", g.precision}, {"fscore", g.fscore},
                   {"pairs", g.pair_count}};
  j["groups"] = groups;
  return j.dump(2);
}

std::string MetricsReport::to_table() const {
  std::ostringstream os;
  auto pct = [](double v) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << 100.0 * v;
    return s.str();
  };
  os << "segment-level (micro)  R=" << pct(recall) << "  P=" << pct(precision)
     << "  F=" << pct(fscore) << "\n";
  os << "segment-level (macro)  R=" << pct(macro_recall) << "  P=" << pct(macro_precision)
     << "  F=" << pct(macro_fscore) << "\n";
  if (frr || far) {
    auto frac = [](double v) {
      std::ostringstream s;
      s.setf(std::ios::fixed);
      s.precision(4);
      s << v;
      return s.str();
    };
    os << "video-level            ";
    if (frr) os << "FRR=" << frac(*frr) << "  ";
    if (far) os << "FAR=" << frac(*far);
    os << "\n";
  }
  if (!per_group.empty()) {
    os << "groups:\n";
    std::size_t width = 0;
    for (const auto& [tag, g] : per_group) width = std::max(width, tag.size());
    for (const auto& [tag, g] : per_group) {
      os << "  " << tag << std::string(width - tag.size() + 2, ' ') << "R=" << pct(g.recall)
         << "  P=" << pct(g.precision) << "  F=" << pct(g.fscore) << "  (" << g.pair_count
         << " pairs)\n";
    }
  }
  os << "pairs: " << pair_count << " (" << positive_pair_count << " positive)\n";
  return os.str();
}

}  // namespace copyloc
