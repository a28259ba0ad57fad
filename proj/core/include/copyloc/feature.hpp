#pragma once

#include <filesystem>
#include <string>

#include "copyloc/mat.hpp"

namespace copyloc {

inline constexpr std::size_t kDefaultMaxFrames = 1200;
inline constexpr std::size_t kDefaultFeatureDim = 256;
inline constexpr double kUnitNormTolerance = 1e-4;

// One video as an ordered list of frame embeddings at 1 fps, so frame
// index == seconds. `normalized` asserts every row is unit L2.
struct FeatureSequence {
  std::string video_id;
  bool normalized = false;
  Mat frames;  // n x dim

  std::size_t length() const { return frames.rows(); }
  std::size_t dim() const { return frames.cols(); }

  // Throws on any violated invariant (finiteness, norms, max length).
  void validate(std::size_t max_frames = kDefaultMaxFrames) const;
};

struct ReadFeatureOptions {
  std::size_t max_frames = kDefaultMaxFrames;
  bool truncate = false;  // truncate instead of rejecting over-long sequences
};

// Binary feature file, magic "VCF1":
//   "VCF1" | u8 normalized | u32 n | u32 dim | n*dim little-endian f32
// video_id is not stored; it is taken from the file stem.
FeatureSequence read_features(const std::filesystem::path& path, const ReadFeatureOptions& opts = {});
void write_features(const std::filesystem::path& path, const FeatureSequence& seq);

}  // namespace copyloc
