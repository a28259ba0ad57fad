#pragma once

#include <string>
#include <vector>

#include "copyloc/annotation.hpp"
#include "copyloc/sim_matrix.hpp"

namespace copyloc {

// Localization hyperparameters. Every method first min-max normalizes the
// matrix values (constant matrices are clamped to [0,1] instead), so the
// thresholds below are scale independent. Defaults are calibrated on the
// synthetic suite.
struct DetectorParams {
  double t_bin = 0.5;         // binarization threshold (HV votes, CC mask)
  double t_node = 0.5;        // TN node admission threshold
  int gap = 5;                // max frame gap within a chain / TN edge span
  int v_min = 3;              // min votes per Hough offset bin
  int bin_width = 2;          // Hough offset bin width
  int l_min = 3;              // min chain length in cells
  double s_min = 0.3;         // min mean similarity of an emitted chain
  int a_min = 9;              // min box area in cells (CC)
  double nms_iou = 0.3;       // NMS threshold (CC)
  double dp_gap_penalty = 0.1;

  void validate() const;
  // Named override for --param key=value; throws bad_argument on unknown keys.
  void set(const std::string& key, double value);
};

enum class AlignMethod { hv, tn, dp, dtw, cc };

AlignMethod parse_method(const std::string& name);
const char* method_name(AlignMethod m);

// Offset-histogram Hough voting: cells above t_bin vote for their
// diagonal offset; bins with enough votes become peaks whose cell runs
// (split at query gaps > gap) turn into boxes.
std::vector<SegmentBox> hough_voting(const SimMatrix& s, const DetectorParams& p);

// Graph alignment: thresholded cells are nodes, edges connect strictly
// increasing cells within `gap` on both axes, and maximum-weight paths
// are peeled off by DAG dynamic programming until too weak.
std::vector<SegmentBox> temporal_network(const SimMatrix& s, const DetectorParams& p);

// Diagonal-block dynamic programming with a penalty for horizontal or
// vertical steps; chains are traced back from local score maxima.
std::vector<SegmentBox> dyn_prog(const SimMatrix& s, const DetectorParams& p);

// Subsequence DTW on cost 1 - similarity, local-alignment style: paths
// may start anywhere (costs are shifted by -(1 - s_min) so extending is
// only worthwhile on similar cells). Best paths are peeled off and their
// box regions suppressed.
std::vector<SegmentBox> dtw_align(const SimMatrix& s, const DetectorParams& p);

// Connected-component box detector on the binarized matrix; the
// deterministic stand-in for a trained detection head. Requires a
// dual_softmax matrix.
std::vector<SegmentBox> cc_detect(const SimMatrix& s, const DetectorParams& p);

// Greedy descending-score suppression; ties broken by (ts_q, ts_r).
std::vector<SegmentBox> nms(std::vector<SegmentBox> boxes, double iou_thresh);

std::vector<SegmentBox> localize(const SimMatrix& s, AlignMethod method, const DetectorParams& p);

// Shared helper: (v - min) / (max - min), or clamp to [0,1] when the
// matrix is constant.
Mat minmax_normalize(const Mat& values);

}  // namespace copyloc
