#include <cmath>

#include "copyloc/losses.hpp"
#include "copyloc/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace copyloc;

namespace {

SegmentBox box(double ts_q, double te_q, double ts_r, double te_r, double score = 1.0) {
  return {ts_q, te_q, ts_r, te_r, score};
}

// Random overlapping pair with every edge comfortably away from the
// finite-difference step and from degenerate overlap boundaries.
std::pair<SegmentBox, SegmentBox> nondegenerate_pair(Rng& rng) {
  while (true) {
    SegmentBox a = box(rng.uniform() * 10, 0, rng.uniform() * 10, 0);
    a.te_q = a.ts_q + 2.0 + rng.uniform() * 6;
    a.te_r = a.ts_r + 2.0 + rng.uniform() * 6;
    SegmentBox b = box(a.ts_q + (rng.uniform() - 0.5) * 3, 0, a.ts_r + (rng.uniform() - 0.5) * 3, 0);
    b.te_q = b.ts_q + 2.0 + rng.uniform() * 6;
    b.te_r = b.ts_r + 2.0 + rng.uniform() * 6;
    if (b.ts_q < 0 || b.ts_r < 0) continue;
    if (iou(a, b) < 0.05) continue;
    const double edges_a[4] = {a.ts_q, a.te_q, a.ts_r, a.te_r};
    const double edges_b[4] = {b.ts_q, b.te_q, b.ts_r, b.te_r};
    bool ok = true;
    for (double ea : edges_a)
      for (double eb : edges_b)
        if (std::abs(ea - eb) < 1e-3) ok = false;
    if (ok) return {a, b};
  }
}

}  // namespace

TEST_CASE("iou closed forms") {
  const SegmentBox a = box(0, 2, 0, 2);
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, box(10, 12, 10, 12)) == 0.0);
  CHECK(iou(a, box(1, 3, 0, 2)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("iou is symmetric and bounded on random pairs") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    SegmentBox a = box(rng.uniform() * 20, 0, rng.uniform() * 20, 0);
    a.te_q = a.ts_q + 0.5 + rng.uniform() * 10;
    a.te_r = a.ts_r + 0.5 + rng.uniform() * 10;
    SegmentBox b = box(rng.uniform() * 20, 0, rng.uniform() * 20, 0);
    b.te_q = b.ts_q + 0.5 + rng.uniform() * 10;
    b.te_r = b.ts_r + 0.5 + rng.uniform() * 10;
    const double v = iou(a, b);
    CHECK(v == iou(b, a));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("bce closed forms") {
  CHECK(bce(1.0 - 1e-7, 1.0) == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(bce(0.5, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bce(0.5, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bce(1e-7, 1.0) == doctest::Approx(-std::log(1e-7)).epsilon(1e-9));
  CHECK(bce(1e-7, 1.0) == doctest::Approx(16.118).epsilon(1e-3));
}

TEST_CASE("bce gradient matches central differences") {
  Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const double p = 0.05 + 0.9 * rng.uniform();
    const double y = rng.below(2) ? 1.0 : 0.0;
    const double analytic = bce_grad_p(p, y);
    const double numeric = oracle::central_diff([&](double x) { return bce(x, y); }, p);
    CHECK(std::abs(analytic - numeric) / std::max(1.0, std::abs(numeric)) < 1e-4);
  }
}

TEST_CASE("iou loss gradient matches central differences") {
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const auto [pred, gt] = nondegenerate_pair(rng);
    const auto grad = iou_loss_grad(pred, gt);
    for (int c = 0; c < 4; ++c) {
      auto perturbed = [&](double x) {
        SegmentBox p = pred;
        (c == 0 ? p.ts_q : c == 1 ? p.te_q : c == 2 ? p.ts_r : p.te_r) = x;
        return 1.0 - iou(p, gt);
      };
      const double base = (c == 0 ? pred.ts_q : c == 1 ? pred.te_q : c == 2 ? pred.ts_r : pred.te_r);
      const double numeric = oracle::central_diff(perturbed, base);
      const double denom = std::max(1.0, std::abs(numeric));
      CHECK(std::abs(grad[c] - numeric) / denom < 1e-4);
    }
  }
}

TEST_CASE("segment loss closed forms") {
  CHECK(segment_loss({}, {}, 5.0) == 0.0);

  std::vector<SegmentPrediction> perfect{{0.999999, box(0, 2, 0, 2)}};
  std::vector<SegmentTarget> target{{1.0, box(0, 2, 0, 2)}};
  CHECK(segment_loss(perfect, target, 5.0) == doctest::Approx(0.0).epsilon(1e-4));

  std::vector<SegmentPrediction> preds{{0.5, box(0, 2, 0, 2)}};
  std::vector<SegmentTarget> gts{{1.0, box(1, 3, 0, 2)}};
  CHECK(segment_loss(preds, gts, 5.0) ==
        doctest::Approx(std::log(2.0) + 5.0 * (2.0 / 3.0)).epsilon(1e-9));
  CHECK(segment_loss(preds, gts, 5.0) == doctest::Approx(4.0265).epsilon(1e-3));

  std::vector<SegmentTarget> mismatched(2);
  CHECK_THROWS_AS((void)segment_loss(preds, mismatched, 5.0), Error);
}

TEST_CASE("segment loss is nonnegative and zero only for perfect outputs") {
  Rng rng(34);
  for (int trial = 0; trial < 50; ++trial) {
    const auto [pred_box, gt_box] = nondegenerate_pair(rng);
    std::vector<SegmentPrediction> preds{{rng.uniform(), pred_box}};
    std::vector<SegmentTarget> gts{{rng.below(2) ? 1.0 : 0.0, gt_box}};
    const double loss = segment_loss(preds, gts, 5.0);
    CHECK(loss >= 0.0);
    const bool perfect = (gts[0].p_star == 1.0 && preds[0].p == 1.0 && iou(pred_box, gt_box) == 1.0) ||
                         (gts[0].p_star == 0.0 && preds[0].p == 0.0);
    if (loss < 1e-6) CHECK(perfect);
  }
}

TEST_CASE("total and semi-supervised sums") {
  CHECK(total_loss(0.0, 0.0) == 0.0);
  CHECK(total_loss(1.5, 0.25) == 1.75);
  CHECK(semi_total(3.0, 100.0, 0.0) == 3.0);
  CHECK(semi_total(1.0, 0.4, 0.5) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK_THROWS_AS(semi_total(1.0, 1.0, -0.1), Error);
}

TEST_CASE("greedy max-IoU matching") {
  const std::vector<SegmentBox> gts{box(0, 10, 0, 10), box(20, 30, 20, 30)};
  std::vector<SegmentBox> preds{
      box(0, 10, 0, 10, 0.9),     // exact match of gt 0
      box(1, 11, 0, 10, 0.8),     // overlaps gt 0 but gt 0 is taken
      box(21, 29, 21, 29, 0.7),   // matches gt 1
      box(50, 60, 50, 60, 0.6),   // matches nothing
  };
  const auto targets = match_boxes(preds, gts);
  REQUIRE(targets.size() == 4);
  CHECK(targets[0].p_star == 1.0);
  CHECK(targets[0].t_star == gts[0]);
  CHECK(targets[1].p_star == 0.0);
  CHECK(targets[2].p_star == 1.0);
  CHECK(targets[2].t_star == gts[1]);
  CHECK(targets[3].p_star == 0.0);

  // Below the IoU floor nothing matches.
  const auto none = match_boxes({box(0, 1, 0, 1, 0.5)}, {box(5, 6, 5, 6)});
  CHECK(none[0].p_star == 0.0);
}
