#include <cmath>

#include "copyloc/similarity.hpp"
#include "copyloc/synthetic.hpp"
#include "doctest.h"

using namespace copyloc;

namespace {

// Highest raw cosine between any query/reference frame pair.
double max_cosine(const GeneratedPair& gp) {
  const SimMatrix s = cosine_matrix(gp.query.frames, gp.ref.frames, 1.0);
  return s.values.max_value();
}

}  // namespace

TEST_CASE("generation is bit-identical per seed") {
  PairSpec spec;
  spec.len_q = 40;
  spec.len_r = 50;
  spec.copies = {{.duration = 12, .sigma = 0.05}};
  const GeneratedPair a = gen_pair(123, spec);
  const GeneratedPair b = gen_pair(123, spec);
  CHECK(a.query.frames.data() == b.query.frames.data());
  CHECK(a.ref.frames.data() == b.ref.frames.data());
  CHECK(a.annotation.gt_boxes.size() == b.annotation.gt_boxes.size());
  CHECK(a.annotation.gt_boxes[0] == b.annotation.gt_boxes[0]);

  const GeneratedPair c = gen_pair(124, spec);
  CHECK(a.query.frames.data() != c.query.frames.data());
}

TEST_CASE("pairs without copies stay dissimilar at dim 256") {
  PairSpec spec;
  spec.len_q = 30;
  spec.len_r = 30;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const GeneratedPair gp = gen_pair(seed, spec);
    CHECK(gp.annotation.gt_boxes.empty());
    CHECK(gp.annotation.weak_label == false);
    worst = std::max(worst, max_cosine(gp));
  }
  CHECK(worst < 0.5);
}

TEST_CASE("an exact copy plants a diagonal of exact ones") {
  PairSpec spec;
  spec.len_q = 40;
  spec.len_r = 60;
  spec.copies = {{.duration = 15, .query_start = 10, .ref_start = 20}};
  const GeneratedPair gp = gen_pair(5, spec);
  const SimMatrix s = cosine_matrix(gp.query.frames, gp.ref.frames, 1.0);
  for (int j = 0; j < 15; ++j)
    CHECK(s.values(10 + j, 20 + j) == doctest::Approx(1.0).epsilon(1e-12));

  // High-similarity cells appear only where boxes were planted.
  const SegmentBox& gt = gp.annotation.gt_boxes[0];
  for (std::size_t m = 0; m < s.rows(); ++m)
    for (std::size_t n = 0; n < s.cols(); ++n)
      if (s.values(m, n) >= 0.99) {
        CHECK(m >= gt.ts_q);
        CHECK(m < gt.te_q);
        CHECK(n >= gt.ts_r);
        CHECK(n < gt.te_r);
      }
}

TEST_CASE("a reversed copy plants an anti-diagonal of exact ones") {
  PairSpec spec;
  spec.len_q = 40;
  spec.len_r = 60;
  spec.copies = {{.duration = 11, .reversed = true, .query_start = 6, .ref_start = 30}};
  const GeneratedPair gp = gen_pair(9, spec);
  const SimMatrix s = cosine_matrix(gp.query.frames, gp.ref.frames, 1.0);
  for (int j = 0; j < 11; ++j)
    CHECK(s.values(6 + j, 30 + 10 - j) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("speed factors stretch the reference extent") {
  PairSpec spec;
  spec.len_q = 40;
  spec.len_r = 60;
  spec.copies = {{.duration = 10, .speed = 2.0, .query_start = 4, .ref_start = 8}};
  const GeneratedPair gp = gen_pair(13, spec);
  const SegmentBox& gt = gp.annotation.gt_boxes[0];
  CHECK(gt.te_q - gt.ts_q == 10.0);
  CHECK(gt.te_r - gt.ts_r == 20.0);

  PairSpec slow = spec;
  slow.copies = {{.duration = 10, .speed = 0.5, .query_start = 4, .ref_start = 8}};
  const GeneratedPair gs = gen_pair(13, slow);
  CHECK(gs.annotation.gt_boxes[0].te_r - gs.annotation.gt_boxes[0].ts_r == 5.0);
}

TEST_CASE("placement errors are reported") {
  PairSpec overlap;
  overlap.len_q = 40;
  overlap.len_r = 60;
  overlap.copies = {{.duration = 10, .query_start = 0, .ref_start = 0},
                    {.duration = 10, .query_start = 5, .ref_start = 30}};
  try {
    gen_pair(1, overlap);
    FAIL("expected OverlapInPlan");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::overlap_in_plan);
  }

  PairSpec too_big;
  too_big.len_q = 8;
  too_big.len_r = 60;
  too_big.copies = {{.duration = 10}};
  try {
    gen_pair(1, too_big);
    FAIL("expected DoesNotFit");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::does_not_fit);
  }

  PairSpec crowded;
  crowded.len_q = 20;
  crowded.len_r = 20;
  crowded.copies = {{.duration = 9}, {.duration = 9}, {.duration = 9}};
  CHECK_THROWS_AS(gen_pair(1, crowded), Error);
}

TEST_CASE("noisy copies keep the normalized flag honest") {
  PairSpec spec;
  spec.len_q = 30;
  spec.len_r = 30;
  spec.copies = {{.duration = 10, .sigma = 0.2}};
  const GeneratedPair gp = gen_pair(21, spec);
  CHECK(gp.query.normalized);
  gp.query.validate();
  gp.ref.validate();
}
