#include "copyloc/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "copyloc/rng.hpp"

namespace copyloc {

namespace {

struct Placement {
  std::size_t q_start, q_len;
  std::size_t r_start, r_len;
};

bool intervals_overlap(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
  return a0 < b1 && b0 < a1;  // [a0,a1) vs [b0,b1)
}

bool placement_clashes(const Placement& a, const Placement& b) {
  return intervals_overlap(a.q_start, a.q_start + a.q_len, b.q_start, b.q_start + b.q_len) ||
         intervals_overlap(a.r_start, a.r_start + a.r_len, b.r_start, b.r_start + b.r_len);
}

void normalize_row(Mat& m, std::size_t row) {
  auto r = m.row(row);
  const double n = l2_norm(r);
  for (double& v : r) v /= n;
}

Mat random_unit_frames(Rng& rng, std::size_t n, std::size_t dim) {
  Mat frames(n, dim);
  for (double& v : frames.data()) v = rng.gaussian();
  for (std::size_t i = 0; i < n; ++i) normalize_row(frames, i);
  return frames;
}

}  // namespace

GeneratedPair gen_pair(std::uint64_t seed, const PairSpec& spec) {
  if (spec.len_q == 0 || spec.len_r == 0 || spec.dim == 0)
    fail(Errc::bad_argument, "pair spec needs positive lengths and dim");
  Rng rng(seed);

  GeneratedPair out;
  out.ref.video_id = spec.ref_id;
  out.ref.normalized = true;
  out.ref.frames = random_unit_frames(rng, spec.len_r, spec.dim);
  out.query.video_id = spec.query_id;
  out.query.normalized = true;
  out.query.frames = random_unit_frames(rng, spec.len_q, spec.dim);

  // Plan placements first so the whole layout is rejected before any
  // frame is touched.
  std::vector<Placement> placements;
  for (const auto& copy : spec.copies) {
    if (copy.duration < 1.0 || (copy.speed != 0.5 && copy.speed != 1.0 && copy.speed != 2.0))
      fail(Errc::bad_argument, "copy needs duration >= 1 and speed in {0.5, 1, 2}");
    Placement pl;
    pl.q_len = static_cast<std::size_t>(std::llround(copy.duration));
    pl.r_len = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(copy.duration * copy.speed)));
    if (pl.q_len > spec.len_q || pl.r_len > spec.len_r)
      fail(Errc::does_not_fit, "copy longer than video");

    if (copy.query_start || copy.ref_start) {
      if (!copy.query_start || !copy.ref_start)
        fail(Errc::bad_argument, "explicit placement needs both starts");
      pl.q_start = *copy.query_start;
      pl.r_start = *copy.ref_start;
      if (pl.q_start + pl.q_len > spec.len_q || pl.r_start + pl.r_len > spec.len_r)
        fail(Errc::does_not_fit, "explicit placement exceeds video length");
      for (const auto& prev : placements)
        if (placement_clashes(pl, prev)) fail(Errc::overlap_in_plan, "planted segments overlap");
    } else {
      bool placed = false;
      for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
        pl.q_start = static_cast<std::size_t>(rng.below(spec.len_q - pl.q_len + 1));
        pl.r_start = static_cast<std::size_t>(rng.below(spec.len_r - pl.r_len + 1));
        placed = std::none_of(placements.begin(), placements.end(),
                              [&](const Placement& prev) { return placement_clashes(pl, prev); });
      }
      if (!placed) fail(Errc::does_not_fit, "could not place copy without overlap");
    }
    placements.push_back(pl);
  }

  for (std::size_t c = 0; c < spec.copies.size(); ++c) {
    const CopySpec& copy = spec.copies[c];
    const Placement& pl = placements[c];
    for (std::size_t j = 0; j < pl.q_len; ++j) {
      const std::size_t src_j = copy.reversed ? pl.q_len - 1 - j : j;
      // Align-corners-false sampling of the reference span.
      double pos = (static_cast<double>(src_j) + 0.5) * copy.speed - 0.5;
      pos = std::clamp(pos, 0.0, static_cast<double>(pl.r_len - 1));
      const std::size_t lo = static_cast<std::size_t>(pos);
      const std::size_t hi = std::min(lo + 1, pl.r_len - 1);
      const double frac = pos - static_cast<double>(lo);
      auto dst = out.query.frames.row(pl.q_start + j);
      const auto a = out.ref.frames.row(pl.r_start + lo);
      const auto b = out.ref.frames.row(pl.r_start + hi);
      for (std::size_t k = 0; k < spec.dim; ++k) {
        double v = (1.0 - frac) * a[k] + frac * b[k];
        if (copy.sigma > 0.0) v += copy.sigma * rng.gaussian();
        dst[k] = v;
      }
      normalize_row(out.query.frames, pl.q_start + j);
    }
  }

  out.annotation.query_id = spec.query_id;
  out.annotation.ref_id = spec.ref_id;
  for (const auto& pl : placements) {
    SegmentBox box;
    box.ts_q = static_cast<double>(pl.q_start);
    box.te_q = static_cast<double>(pl.q_start + pl.q_len);
    box.ts_r = static_cast<double>(pl.r_start);
    box.te_r = static_cast<double>(pl.r_start + pl.r_len);
    box.score = 1.0;
    out.annotation.gt_boxes.push_back(box);
  }
  out.annotation.weak_label = !spec.copies.empty();
  out.annotation.validate();
  out.query.validate(std::max(spec.len_q, kDefaultMaxFrames));
  out.ref.validate(std::max(spec.len_r, kDefaultMaxFrames));
  return out;
}

}  // namespace copyloc
