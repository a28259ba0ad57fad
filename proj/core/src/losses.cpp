#include "copyloc/losses.hpp"

#include <algorithm>
#include <cmath>

namespace copyloc {

namespace {

struct Overlap {
  double inter = 0.0;
  double uni = 0.0;
};

Overlap rect_overlap(const SegmentBox& a, const SegmentBox& b) {
  const double iw = std::min(a.te_q, b.te_q) - std::max(a.ts_q, b.ts_q);
  const double ih = std::min(a.te_r, b.te_r) - std::max(a.ts_r, b.ts_r);
  const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
  return {inter, a.area() + b.area() - inter};
}

}  // namespace

double iou(const SegmentBox& a, const SegmentBox& b) {
  const Overlap o = rect_overlap(a, b);
  return o.uni > 0.0 ? o.inter / o.uni : 0.0;
}

double bce(double p, double y) {
  const double c = std::clamp(p, kBceEps, 1.0 - kBceEps);
  return -(y * std::log(c) + (1.0 - y) * std::log(1.0 - c));
}

double bce_grad_p(double p, double y) {
  const double c = std::clamp(p, kBceEps, 1.0 - kBceEps);
  return -y / c + (1.0 - y) / (1.0 - c);
}

std::array<double, 4> iou_loss_grad(const SegmentBox& pred, const SegmentBox& gt) {
  const double iw = std::min(pred.te_q, gt.te_q) - std::max(pred.ts_q, gt.ts_q);
  const double ih = std::min(pred.te_r, gt.te_r) - std::max(pred.ts_r, gt.ts_r);
  const double inter = (iw > 0.0 && ih > 0.0) ? iw * ih : 0.0;
  const double uni = pred.area() + gt.area() - inter;

  // d inter / d coord: nonzero only when the prediction's edge is the
  // binding one for a positive overlap.
  double di[4] = {0.0, 0.0, 0.0, 0.0};
  if (inter > 0.0) {
    if (pred.ts_q > gt.ts_q) di[0] = -ih;
    if (pred.te_q < gt.te_q) di[1] = ih;
    if (pred.ts_r > gt.ts_r) di[2] = -iw;
    if (pred.te_r < gt.te_r) di[3] = iw;
  }
  const double dq = pred.te_q - pred.ts_q;
  const double dr = pred.te_r - pred.ts_r;
  const double da[4] = {-dr, dr, -dq, dq};  // d area(pred) / d coord

  std::array<double, 4> grad{};
  for (int c = 0; c < 4; ++c) {
    const double du = da[c] - di[c];
    // d(1 - I/U) = -(dI*U - I*dU) / U^2
    grad[c] = -(di[c] * uni - inter * du) / (uni * uni);
  }
  return grad;
}

double segment_loss(std::span<const SegmentPrediction> preds,
                    std::span<const SegmentTarget> targets, double lambda) {
  if (preds.size() != targets.size())
    fail(Errc::length_mismatch, "segment_loss: " + std::to_string(preds.size()) +
                                    " predictions vs " + std::to_string(targets.size()) +
                                    " targets");
  double total = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    total += bce(preds[i].p, targets[i].p_star);
    if (targets[i].p_star == 1.0) total += lambda * (1.0 - iou(preds[i].t, targets[i].t_star));
  }
  return total;
}

double total_loss(double l_seg, double l_video) { return l_seg + l_video; }

double semi_total(double l_s, double l_u, double lambda_u) {
  if (lambda_u < 0.0) fail(Errc::bad_argument, "lambda_u must be nonnegative");
  return l_s + lambda_u * l_u;
}

std::vector<SegmentTarget> match_boxes(const std::vector<SegmentBox>& preds,
                                       const std::vector<SegmentBox>& gts, double min_iou) {
  std::vector<SegmentTarget> targets(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) targets[i] = {0.0, preds[i]};

  struct Cand {
    double overlap;
    std::size_t pred;
    std::size_t gt;
  };
  std::vector<Cand> cands;
  for (std::size_t i = 0; i < preds.size(); ++i)
    for (std::size_t j = 0; j < gts.size(); ++j) {
      const double v = iou(preds[i], gts[j]);
      if (v >= min_iou) cands.push_back({v, i, j});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.overlap != b.overlap) return a.overlap > b.overlap;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.gt < b.gt;
  });

  std::vector<bool> pred_used(preds.size(), false), gt_used(gts.size(), false);
  for (const Cand& c : cands) {
    if (pred_used[c.pred] || gt_used[c.gt]) continue;
    pred_used[c.pred] = true;
    gt_used[c.gt] = true;
    targets[c.pred] = {1.0, gts[c.gt]};
  }
  return targets;
}

}  // namespace copyloc
