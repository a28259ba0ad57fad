#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "copyloc/annotation.hpp"

namespace copyloc {

// Exact area of the union of rectangles (coordinate-compression sweep).
double region_union_area(std::span<const SegmentBox> boxes);

// Exact area of union(a) intersected with union(b).
double region_overlap_area(std::span<const SegmentBox> a, std::span<const SegmentBox> b);

// Per-pair area bookkeeping. Recall/precision follow the union-of-areas
// definition; a pair with empty ground truth is excluded from recall and
// a pair with no predictions is excluded from precision (macro view);
// the micro aggregation just sums areas, which encodes the same rules.
struct PairMetrics {
  double overlap_area = 0.0;
  double gt_area = 0.0;
  double pred_area = 0.0;

  std::optional<double> recall() const;
  std::optional<double> precision() const;
};

PairMetrics pair_segment_metrics(std::span<const SegmentBox> preds,
                                 std::span<const SegmentBox> gts);

struct GroupStats {
  double recall = 0.0;
  double precision = 0.0;
  double fscore = 0.0;
  std::size_t pair_count = 0;
};

struct MetricsReport {
  double recall = 0.0;     // micro (area-weighted) headline numbers
  double precision = 0.0;
  double fscore = 0.0;
  double macro_recall = 0.0;
  double macro_precision = 0.0;
  double macro_fscore = 0.0;
  std::optional<double> frr;
  std::optional<double> far;
  std::map<std::string, GroupStats> per_group;
  std::size_t pair_count = 0;
  std::size_t positive_pair_count = 0;

  std::string to_json() const;
  std::string to_table() const;
};

// One evaluated pair. Video lengths (seconds) enable the copy-duration
// ratio buckets; group tags come from the annotation.
struct PairEvalInput {
  PairAnnotation annotation;
  std::vector<SegmentBox> predictions;
  std::optional<double> query_len;
  std::optional<double> ref_len;
};

double fscore_of(double recall, double precision);

// Micro/macro aggregation plus per-group breakdowns (annotation tags and,
// when lengths are known, 20% copy-duration-ratio buckets).
MetricsReport dataset_metrics(const std::vector<PairEvalInput>& pairs);

// FRR = rejected positives / positives, FAR = accepted negatives /
// negatives; each is absent when its class has no pairs.
struct VideoLevelMetrics {
  std::optional<double> frr;
  std::optional<double> far;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

VideoLevelMetrics video_level_metrics(const std::vector<bool>& predicted_copied,
                                      const std::vector<bool>& labels);

}  // namespace copyloc
