#include "copyloc/align.hpp"

#include <algorithm>
#include <cmath>

#include "copyloc/losses.hpp"

namespace copyloc {

void DetectorParams::validate() const {
  if (t_bin < 0.0 || t_bin > 1.0 || t_node < 0.0 || t_node > 1.0)
    fail(Errc::bad_argument, "thresholds must lie in [0,1]");
  if (gap < 1) fail(Errc::bad_argument, "gap must be >= 1");
  if (v_min < 1 || bin_width < 1 || l_min < 1 || a_min < 1)
    fail(Errc::bad_argument, "counts must be >= 1");
  if (s_min < 0.0 || s_min > 1.0) fail(Errc::bad_argument, "s_min must lie in [0,1]");
  if (nms_iou < 0.0 || nms_iou > 1.0) fail(Errc::bad_argument, "nms_iou must lie in [0,1]");
  if (dp_gap_penalty < 0.0) fail(Errc::bad_argument, "dp_gap_penalty must be >= 0");
}

void DetectorParams::set(const std::string& key, double value) {
  if (key == "t_bin") t_bin = value;
  else if (key == "t_node") t_node = value;
  else if (key == "gap") gap = static_cast<int>(value);
  else if (key == "v_min") v_min = static_cast<int>(value);
  else if (key == "bin_width") bin_width = static_cast<int>(value);
  else if (key == "l_min") l_min = static_cast<int>(value);
  else if (key == "s_min") s_min = value;
  else if (key == "a_min") a_min = static_cast<int>(value);
  else if (key == "nms_iou") nms_iou = value;
  else if (key == "dp_gap_penalty") dp_gap_penalty = value;
  else fail(Errc::bad_argument, "unknown detector parameter '" + key + "'");
  validate();
}

AlignMethod parse_method(const std::string& name) {
  if (name == "hv") return AlignMethod::hv;
  if (name == "tn") return AlignMethod::tn;
  if (name == "dp") return AlignMethod::dp;
  if (name == "dtw") return AlignMethod::dtw;
  if (name == "cc") return AlignMethod::cc;
  fail(Errc::bad_argument, "unknown method '" + name + "' (expected hv|tn|dp|dtw|cc)");
}

const char* method_name(AlignMethod m) {
  switch (m) {
    case AlignMethod::hv: return "hv";
    case AlignMethod::tn: return "tn";
    case AlignMethod::dp: return "dp";
    case AlignMethod::dtw: return "dtw";
    case AlignMethod::cc: return "cc";
  }
  return "?";
}

Mat minmax_normalize(const Mat& values) {
  Mat out = values;
  const double lo = values.min_value();
  const double hi = values.max_value();
  if (hi > lo) {
    const double span = hi - lo;
    for (double& v : out.data()) v = (v - lo) / span;
  } else {
    for (double& v : out.data()) v = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

std::vector<SegmentBox> nms(std::vector<SegmentBox> boxes, double iou_thresh) {
  if (iou_thresh < 0.0 || iou_thresh > 1.0) fail(Errc::bad_argument, "nms iou outside [0,1]");
  std::sort(boxes.begin(), boxes.end(), [](const SegmentBox& a, const SegmentBox& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.ts_q != b.ts_q) return a.ts_q < b.ts_q;
    return a.ts_r < b.ts_r;
  });
  std::vector<SegmentBox> kept;
  for (const SegmentBox& cand : boxes) {
    bool suppressed = false;
    for (const SegmentBox& k : kept) {
      if (iou(cand, k) > iou_thresh) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(cand);
  }
  return kept;
}

std::vector<SegmentBox> localize(const SimMatrix& s, AlignMethod method, const DetectorParams& p) {
  switch (method) {
    case AlignMethod::hv: return hough_voting(s, p);
    case AlignMethod::tn: return temporal_network(s, p);
    case AlignMethod::dp: return dyn_prog(s, p);
    case AlignMethod::dtw: return dtw_align(s, p);
    case AlignMethod::cc: return cc_detect(s, p);
  }
  fail(Errc::bad_argument, "unhandled method");
}

namespace detail {

// Cells [m0..m1] x [n0..n1] inclusive map to end-exclusive seconds.
SegmentBox cells_to_box(std::size_t m0, std::size_t m1, std::size_t n0, std::size_t n1,
                        const SimMatrix& s, double score) {
  SegmentBox b;
  b.ts_q = static_cast<double>(m0) * s.scale_q;
  b.te_q = static_cast<double>(m1 + 1) * s.scale_q;
  b.ts_r = static_cast<double>(n0) * s.scale_r;
  b.te_r = static_cast<double>(n1 + 1) * s.scale_r;
  b.score = std::clamp(score, 0.0, 1.0);
  b.validate();
  return b;
}

void sort_by_score(std::vector<SegmentBox>& boxes) {
  std::sort(boxes.begin(), boxes.end(), [](const SegmentBox& a, const SegmentBox& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.ts_q != b.ts_q) return a.ts_q < b.ts_q;
    return a.ts_r < b.ts_r;
  });
}

}  // namespace detail

}  // namespace copyloc
