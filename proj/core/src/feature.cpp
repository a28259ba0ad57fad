#include "copyloc/feature.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace copyloc {

namespace {

constexpr char kMagic[4] = {'V', 'C', 'F', '1'};

void write_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& is, const std::string& what) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4))
    fail(Errc::truncated_file, "while reading " + what);
  return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
         std::uint32_t(b[3]) << 24;
}

float f32_from_bits(std::uint32_t bits) { return std::bit_cast<float>(bits); }
std::uint32_t bits_from_f32(float f) { return std::bit_cast<std::uint32_t>(f); }

}  // namespace

void FeatureSequence::validate(std::size_t max_frames) const {
  if (dim() == 0) fail(Errc::dim_zero, "feature dim is zero (" + video_id + ")");
  if (length() == 0)
    fail(Errc::invariant_violation, "feature sequence has no frames (" + video_id + ")");
  if (length() > max_frames)
    fail(Errc::sequence_too_long, video_id + ": " + std::to_string(length()) + " frames > max " +
                                      std::to_string(max_frames));
  if (!frames.all_finite()) fail(Errc::nonfinite_value, "non-finite entry in " + video_id);
  if (normalized) {
    for (std::size_t i = 0; i < length(); ++i) {
      const double n = l2_norm(frames.row(i));
      if (std::abs(n - 1.0) > kUnitNormTolerance)
        fail(Errc::invalid_norm, video_id + " row " + std::to_string(i) + " has L2 norm " +
                                     std::to_string(n) + " with normalized flag set");
    }
  }
}

FeatureSequence read_features(const std::filesystem::path& path, const ReadFeatureOptions& opts) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(Errc::io_error, "cannot open " + path.string());

  char magic[4];
  if (!is.read(magic, 4)) fail(Errc::truncated_file, "magic in " + path.string());
  if (std::memcmp(magic, kMagic, 4) != 0)
    fail(Errc::bad_magic, path.string() + " does not start with VCF1");

  char flag = 0;
  if (!is.read(&flag, 1)) fail(Errc::truncated_file, "flag byte in " + path.string());
  std::uint32_t n = read_u32(is, "frame count in " + path.string());
  std::uint32_t dim = read_u32(is, "dim in " + path.string());
  if (dim == 0) fail(Errc::dim_zero, path.string());

  FeatureSequence seq;
  seq.video_id = path.stem().string();
  seq.normalized = flag != 0;

  const std::size_t rows = (opts.truncate && n > opts.max_frames) ? opts.max_frames : n;
  seq.frames = Mat(rows, dim);
  std::vector<unsigned char> buf(static_cast<std::size_t>(dim) * 4);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!is.read(reinterpret_cast<char*>(buf.data()), buf.size()))
      fail(Errc::truncated_file, path.string() + " at row " + std::to_string(i));
    for (std::size_t j = 0; j < dim; ++j) {
      const std::uint32_t bits = std::uint32_t(buf[4 * j]) | std::uint32_t(buf[4 * j + 1]) << 8 |
                                 std::uint32_t(buf[4 * j + 2]) << 16 |
                                 std::uint32_t(buf[4 * j + 3]) << 24;
      seq.frames(i, j) = static_cast<double>(f32_from_bits(bits));
    }
  }
  seq.validate(opts.max_frames);
  return seq;
}

void write_features(const std::filesystem::path& path, const FeatureSequence& seq) {
  seq.validate(seq.length());  // length already fixed; only content checks matter here
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  os.write(kMagic, 4);
  const char flag = seq.normalized ? 1 : 0;
  os.write(&flag, 1);
  write_u32(os, static_cast<std::uint32_t>(seq.length()));
  write_u32(os, static_cast<std::uint32_t>(seq.dim()));
  std::vector<unsigned char> buf(seq.dim() * 4);
  for (std::size_t i = 0; i < seq.length(); ++i) {
    for (std::size_t j = 0; j < seq.dim(); ++j) {
      const std::uint32_t bits = bits_from_f32(static_cast<float>(seq.frames(i, j)));
      buf[4 * j] = static_cast<unsigned char>(bits);
      buf[4 * j + 1] = static_cast<unsigned char>(bits >> 8);
      buf[4 * j + 2] = static_cast<unsigned char>(bits >> 16);
      buf[4 * j + 3] = static_cast<unsigned char>(bits >> 24);
    }
    os.write(reinterpret_cast<const char*>(buf.data()), buf.size());
  }
  if (!os) fail(Errc::io_error, "short write to " + path.string());
}

}  // namespace copyloc
