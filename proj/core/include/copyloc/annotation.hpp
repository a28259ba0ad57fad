#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "copyloc/error.hpp"

namespace copyloc {

// One copied-segment pair as a rectangle on the query x reference time
// grid, in seconds. Cell convention is end-exclusive: cells m in [a, b)
// map to seconds [a*scale, b*scale).
struct SegmentBox {
  double ts_q = 0.0;
  double te_q = 0.0;
  double ts_r = 0.0;
  double te_r = 0.0;
  double score = 1.0;

  double area() const { return (te_q - ts_q) * (te_r - ts_r); }
  void validate() const;
};

bool operator==(const SegmentBox& a, const SegmentBox& b);

// Ground truth for a video pair. gt_boxes carry score 1.0. weak_label is
// the video-level copied/not flag; group_tags drive per-group metrics.
struct PairAnnotation {
  std::string query_id;
  std::string ref_id;
  std::vector<SegmentBox> gt_boxes;
  std::optional<bool> weak_label;
  std::vector<std::string> group_tags;

  void validate() const;

  // Video-level positive: weak label if present, else derived from boxes.
  bool is_positive() const { return weak_label.value_or(!gt_boxes.empty()); }
};

// Detector output for a pair; same JSONL schema plus a score per segment.
struct PredictionRecord {
  std::string query_id;
  std::string ref_id;
  std::vector<SegmentBox> boxes;
};

// Annotation JSONL, one pair per line:
//   {"query_id": str, "ref_id": str, "segments": [[ts_q,te_q,ts_r,te_r],...],
//    "weak_label": bool?, "groups": [str]?}
// Prediction JSONL appends the score as a fifth segment element.
std::vector<PairAnnotation> read_annotations(const std::filesystem::path& path);
void write_annotations(const std::filesystem::path& path, const std::vector<PairAnnotation>& anns);

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);
void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRecord>& preds);

}  // namespace copyloc
