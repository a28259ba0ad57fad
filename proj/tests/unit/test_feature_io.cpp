#include <cstdint>
#include <filesystem>
#include <fstream>

#include "copyloc/feature.hpp"
#include "copyloc/rng.hpp"
#include "doctest.h"

using namespace copyloc;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "copyloc_tests";
  fs::create_directories(dir);
  return dir / name;
}

// Raw byte writer so malformed files can be produced on purpose.
void write_raw(const fs::path& path, const std::string& magic, std::uint8_t flag, std::uint32_t n,
               std::uint32_t dim, const std::vector<float>& data) {
  std::ofstream os(path, std::ios::binary);
  os.write(magic.data(), static_cast<std::streamsize>(magic.size()));
  os.write(reinterpret_cast<const char*>(&flag), 1);
  for (std::uint32_t v : {n, dim}) {
    unsigned char b[4] = {(unsigned char)v, (unsigned char)(v >> 8), (unsigned char)(v >> 16),
                          (unsigned char)(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
  }
  os.write(reinterpret_cast<const char*>(data.data()),
           static_cast<std::streamsize>(data.size() * sizeof(float)));
}

}  // namespace

TEST_CASE("feature write/read round-trips a small random matrix exactly") {
  Rng rng(7);
  FeatureSequence seq;
  seq.video_id = "vid";
  seq.frames = Mat(3, 4);
  for (double& v : seq.frames.data()) v = static_cast<float>(rng.gaussian());
  const auto path = temp_file("roundtrip.vcf");
  write_features(path, seq);
  const FeatureSequence back = read_features(path);
  REQUIRE(back.length() == 3);
  REQUIRE(back.dim() == 4);
  CHECK(back.normalized == false);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(back.frames(i, j) == seq.frames(i, j));
}

TEST_CASE("feature round-trip is the identity on random sequences") {
  Rng rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    FeatureSequence seq;
    seq.video_id = "t";
    const std::size_t n = 1 + rng.below(40);
    const std::size_t d = 1 + rng.below(16);
    seq.frames = Mat(n, d);
    for (double& v : seq.frames.data()) v = static_cast<float>(10.0 * rng.gaussian());
    const auto path = temp_file("prop.vcf");
    write_features(path, seq);
    const FeatureSequence back = read_features(path);
    CHECK(back.frames.data() == seq.frames.data());
  }
}

TEST_CASE("bad magic is rejected") {
  const auto path = temp_file("badmagic.vcf");
  write_raw(path, "XXXX", 0, 1, 2, {0.f, 0.f});
  CHECK_THROWS_WITH_AS(read_features(path), doctest::Contains("BadMagic"), Error);
}

TEST_CASE("truncated file is rejected") {
  const auto path = temp_file("short.vcf");
  write_raw(path, "VCF1", 0, 4, 4, {0.f, 0.f, 0.f});  // promises 16 floats, ships 3
  try {
    read_features(path);
    FAIL("expected TruncatedFile");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::truncated_file);
  }
}

TEST_CASE("zero dim is rejected") {
  const auto path = temp_file("dimzero.vcf");
  write_raw(path, "VCF1", 0, 1, 0, {});
  try {
    read_features(path);
    FAIL("expected DimZero");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::dim_zero);
  }
}

TEST_CASE("all-zero 1200x256 file: accepted unflagged, InvalidNorm when flagged") {
  std::vector<float> zeros(1200 * 256, 0.0f);
  const auto plain = temp_file("zeros.vcf");
  write_raw(plain, "VCF1", 0, 1200, 256, zeros);
  const FeatureSequence seq = read_features(plain);
  CHECK(seq.length() == 1200);

  const auto flagged = temp_file("zeros_norm.vcf");
  write_raw(flagged, "VCF1", 1, 1200, 256, zeros);
  try {
    read_features(flagged);
    FAIL("expected InvalidNorm");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_norm);
  }
}

TEST_CASE("over-long sequences are rejected unless truncation is requested") {
  std::vector<float> data(12 * 2, 1.0f);
  const auto path = temp_file("long.vcf");
  write_raw(path, "VCF1", 0, 12, 2, data);
  try {
    read_features(path, {.max_frames = 10});
    FAIL("expected SequenceTooLong");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::sequence_too_long);
  }
  const FeatureSequence cut = read_features(path, {.max_frames = 10, .truncate = true});
  CHECK(cut.length() == 10);
}

TEST_CASE("non-finite values are rejected") {
  const auto path = temp_file("nan.vcf");
  write_raw(path, "VCF1", 0, 1, 2, {1.0f, std::numeric_limits<float>::quiet_NaN()});
  try {
    read_features(path);
    FAIL("expected NonFiniteValue");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::nonfinite_value);
  }
}
