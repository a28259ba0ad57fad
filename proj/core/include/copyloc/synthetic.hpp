#pragma once

#include <optional>
#include <string>
#include <vector>

#include "copyloc/annotation.hpp"
#include "copyloc/feature.hpp"

namespace copyloc {

// One planted copy: `duration` seconds of query time, taken from the
// reference at `speed` x playback (reference extent = duration * speed),
// optionally reversed, with per-component Gaussian noise sigma added
// before re-normalization. Omitted starts are placed randomly.
struct CopySpec {
  double duration = 20.0;
  double speed = 1.0;  // one of 0.5, 1, 2
  bool reversed = false;
  double sigma = 0.0;
  std::optional<std::size_t> query_start;
  std::optional<std::size_t> ref_start;
};

struct PairSpec {
  std::string query_id = "q";
  std::string ref_id = "r";
  std::size_t len_q = 60;
  std::size_t len_r = 80;
  std::size_t dim = kDefaultFeatureDim;
  std::vector<CopySpec> copies;
};

struct GeneratedPair {
  FeatureSequence query;
  FeatureSequence ref;
  PairAnnotation annotation;
};

// Deterministic per (seed, spec): base frames are i.i.d. unit-normalized
// Gaussians, copies are resampled with align-corners-false linear
// interpolation. The annotation records the exact planted boxes.
// Throws overlap_in_plan / does_not_fit when segments cannot be placed.
GeneratedPair gen_pair(std::uint64_t seed, const PairSpec& spec);

}  // namespace copyloc
