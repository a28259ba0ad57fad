#pragma once

#include <array>
#include <span>
#include <vector>

#include "copyloc/annotation.hpp"

namespace copyloc {

inline constexpr double kBceEps = 1e-7;
inline constexpr double kDefaultLambdaReg = 5.0;
inline constexpr double kDefaultLambdaU = 0.5;
inline constexpr double kMatchMinIou = 0.1;

// Rectangle intersection-over-union on the time grid; symmetric, in [0,1].
double iou(const SegmentBox& a, const SegmentBox& b);

// Binary cross entropy with p clamped to [eps, 1-eps].
double bce(double p, double y);

// d bce / d p inside the clamp region.
double bce_grad_p(double p, double y);

// Partial derivatives of the IoU loss (1 - iou) with respect to the
// prediction's (ts_q, te_q, ts_r, te_r), valid away from degenerate
// overlap boundaries.
std::array<double, 4> iou_loss_grad(const SegmentBox& pred, const SegmentBox& gt);

struct SegmentPrediction {
  double p = 0.0;  // objectness probability
  SegmentBox t;
};

struct SegmentTarget {
  double p_star = 0.0;  // 1 when matched to ground truth
  SegmentBox t_star;    // ignored when p_star == 0
};

// sum_i bce(p_i, p*_i) + lambda * (1 - iou(t_i, t*_i)) [p*_i = 1]
double segment_loss(std::span<const SegmentPrediction> preds,
                    std::span<const SegmentTarget> targets, double lambda = kDefaultLambdaReg);

double total_loss(double l_seg, double l_video);
double semi_total(double l_s, double l_u, double lambda_u = kDefaultLambdaU);

// Greedy max-IoU assignment: each ground-truth box is matched to at most
// one prediction with IoU >= min_iou; matched predictions get p* = 1 and
// that box as target, the rest p* = 0. Returns one target per prediction.
std::vector<SegmentTarget> match_boxes(const std::vector<SegmentBox>& preds,
                                       const std::vector<SegmentBox>& gts,
                                       double min_iou = kMatchMinIou);

}  // namespace copyloc
