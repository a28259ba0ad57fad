#include <cmath>
#include <filesystem>
#include <fstream>

#include "copyloc/attention.hpp"
#include "copyloc/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace copyloc;

namespace {

Mat random_mat(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  Mat m(rows, cols);
  for (double& v : m.data()) v = scale * rng.gaussian();
  return m;
}

double max_abs_diff(const Mat& a, const Mat& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

}  // namespace

TEST_CASE("temporal encoding matches the sinusoid formula") {
  const Mat enc = temporal_encoding(3, 4);
  CHECK(enc(0, 0) == 0.0);
  CHECK(enc(0, 1) == 1.0);
  CHECK(enc(1, 0) == doctest::Approx(0.841471).epsilon(1e-6));  // sin(1)
  CHECK(enc(1, 1) == doctest::Approx(std::cos(1.0)).epsilon(1e-12));
  CHECK(enc(1, 2) == doctest::Approx(std::sin(1.0 / std::pow(10000.0, 0.5))).epsilon(1e-12));
  CHECK(enc(2, 0) == doctest::Approx(std::sin(2.0)).epsilon(1e-12));
}

TEST_CASE("temporal encoding rejects odd dims") {
  try {
    temporal_encoding(4, 3);
    FAIL("expected OddDimension");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::odd_dimension);
  }
}

TEST_CASE("build_input prepends the class token and adds the encoding") {
  FeatureSequence seq;
  seq.video_id = "v";
  seq.frames = Mat(2, 4, 0.0);
  const std::vector<double> zero_token(4, 0.0);
  const Mat input = build_input(seq, zero_token);
  const Mat enc = temporal_encoding(3, 4);
  REQUIRE(input.rows() == 3);
  CHECK(max_abs_diff(input, enc) == 0.0);

  FeatureSequence ones;
  ones.video_id = "v";
  ones.frames = Mat(1, 2, 1.0);
  const std::vector<double> token2(2, 0.0);
  const Mat in2 = build_input(ones, token2);
  REQUIRE(in2.rows() == 2);
  CHECK(in2(1, 0) == doctest::Approx(1.0 + std::sin(1.0)).epsilon(1e-12));
  CHECK(in2(1, 1) == doctest::Approx(1.0 + std::cos(1.0)).epsilon(1e-12));

  const std::vector<double> wrong(3, 0.0);
  CHECK_THROWS_AS(build_input(ones, wrong), Error);
}

TEST_CASE("softmax attention: single key/value row passes the value through") {
  Rng rng(1);
  const Mat q = random_mat(rng, 3, 4);
  const Mat k = random_mat(rng, 1, 4);
  const Mat v = random_mat(rng, 1, 5);
  const Mat out = softmax_attention(q, k, v);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t c = 0; c < 5; ++c) CHECK(out(i, c) == doctest::Approx(v(0, c)).epsilon(1e-12));
}

TEST_CASE("softmax attention: identical keys average the values") {
  Rng rng(2);
  const Mat q = random_mat(rng, 2, 3);
  Mat k(4, 3);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t c = 0; c < 3; ++c) k(j, c) = 0.7;
  const Mat v = random_mat(rng, 4, 2);
  const Mat out = softmax_attention(q, k, v);
  for (std::size_t c = 0; c < 2; ++c) {
    const double mean = (v(0, c) + v(1, c) + v(2, c) + v(3, c)) / 4.0;
    CHECK(out(0, c) == doctest::Approx(mean).epsilon(1e-12));
    CHECK(out(1, c) == doctest::Approx(mean).epsilon(1e-12));
  }
}

TEST_CASE("softmax attention matches the double-loop oracle") {
  Rng rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    const Mat q = random_mat(rng, 4, 3);
    const Mat k = random_mat(rng, 4, 3);
    const Mat v = random_mat(rng, 4, 3);
    CHECK(max_abs_diff(softmax_attention(q, k, v), oracle::brute_softmax_attention(q, k, v)) <
          1e-6);
  }
}

TEST_CASE("linear attention: single row and identical-key cases") {
  Rng rng(4);
  const Mat q = random_mat(rng, 3, 4);
  const Mat k1 = random_mat(rng, 1, 4);
  const Mat v1 = random_mat(rng, 1, 2);
  const Mat out1 = linear_attention(q, k1, v1);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t c = 0; c < 2; ++c)
      CHECK(out1(i, c) == doctest::Approx(v1(0, c)).epsilon(1e-12));

  Mat k(5, 4);
  for (std::size_t j = 0; j < 5; ++j)
    for (std::size_t c = 0; c < 4; ++c) k(j, c) = -0.3;
  const Mat v = random_mat(rng, 5, 3);
  const Mat out = linear_attention(q, k, v);
  for (std::size_t c = 0; c < 3; ++c) {
    double mean = 0.0;
    for (std::size_t j = 0; j < 5; ++j) mean += v(j, c) / 5.0;
    CHECK(out(0, c) == doctest::Approx(mean).epsilon(1e-9));
  }
}

TEST_CASE("linear attention equals its unfactored quadratic form") {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const Mat q = random_mat(rng, 6, 4);
    const Mat k = random_mat(rng, 6, 4);
    const Mat v = random_mat(rng, 6, 4);
    CHECK(max_abs_diff(linear_attention(q, k, v), oracle::quadratic_linear_attention(q, k, v)) <
          1e-6);
  }
}

TEST_CASE("attention outputs stay inside the value column ranges") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng.below(6);
    const Mat q = random_mat(rng, n, 3);
    const Mat k = random_mat(rng, n, 3);
    const Mat v = random_mat(rng, n, 3);
    for (const Mat& out : {softmax_attention(q, k, v), linear_attention(q, k, v)}) {
      for (std::size_t c = 0; c < 3; ++c) {
        double lo = v(0, c), hi = v(0, c);
        for (std::size_t j = 1; j < n; ++j) {
          lo = std::min(lo, v(j, c));
          hi = std::max(hi, v(j, c));
        }
        for (std::size_t i = 0; i < n; ++i) {
          CHECK(out(i, c) >= lo - 1e-9);
          CHECK(out(i, c) <= hi + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("enhance_pair with an empty stack is the identity") {
  Rng rng(7);
  AttentionWeights w = make_random_weights(0, 8, 2, 0, 8);
  const Mat a = random_mat(rng, 4, 8);
  const Mat b = random_mat(rng, 5, 8);
  const EnhancedPair out = enhance_pair(a, b, w, AttnKernel::vanilla);
  CHECK(max_abs_diff(out.query, a) == 0.0);
  CHECK(max_abs_diff(out.ref, b) == 0.0);
}

TEST_CASE("enhance_pair is symmetric in its arguments") {
  Rng rng(8);
  for (AttnKernel kernel : {AttnKernel::vanilla, AttnKernel::linear}) {
    AttentionWeights w = make_random_weights(42, 8, 2, 2, 8);
    const Mat a = random_mat(rng, 4, 8);
    const Mat b = random_mat(rng, 6, 8);
    const EnhancedPair ab = enhance_pair(a, b, w, kernel);
    const EnhancedPair ba = enhance_pair(b, a, w, kernel);
    CHECK(max_abs_diff(ab.query, ba.ref) == 0.0);
    CHECK(max_abs_diff(ab.ref, ba.query) == 0.0);
  }
}

TEST_CASE("one single-head layer matches a step-by-step composition oracle") {
  Rng rng(9);
  AttentionWeights w = make_random_weights(10, 4, 1, 1, 4);
  const Mat a = random_mat(rng, 3, 4);
  const Mat b = random_mat(rng, 3, 4);

  const auto& layer = w.layers[0];
  auto mha1 = [&](const Mat& x, const Mat& kv, const MhaWeights& mw) {
    const Mat qh = matmul(x, mw.wq[0]);
    const Mat kh = matmul(kv, mw.wk[0]);
    const Mat vh = matmul(kv, mw.wv[0]);
    return matmul(oracle::brute_softmax_attention(qh, kh, vh), mw.wo);
  };
  auto add = [](Mat x, const Mat& d) {
    for (std::size_t i = 0; i < x.data().size(); ++i) x.data()[i] += d.data()[i];
    return x;
  };
  const Mat as = add(a, mha1(a, a, layer.self_attn));
  const Mat bs = add(b, mha1(b, b, layer.self_attn));
  const Mat ac = add(as, mha1(as, bs, layer.cross_attn));
  const Mat bc = add(bs, mha1(bs, as, layer.cross_attn));

  const EnhancedPair out = enhance_pair(a, b, w, AttnKernel::vanilla);
  CHECK(max_abs_diff(out.query, ac) < 1e-9);
  CHECK(max_abs_diff(out.ref, bc) < 1e-9);
}

TEST_CASE("video head closed-form cases") {
  AttentionWeights w = make_random_weights(0, 4, 1, 0, 6);
  const std::vector<double> cq(4, 0.3), cr(4, -0.2);

  SUBCASE("all-zero weights give 0.5") {
    for (double& v : w.head_w1.data()) v = 0.0;
    for (double& v : w.head_w2.data()) v = 0.0;
    std::fill(w.head_b1.begin(), w.head_b1.end(), 0.0);
    w.head_b2 = 0.0;
    CHECK(video_head(cq, cr, w) == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("bias-only network gives sigmoid(b)") {
    for (double& v : w.head_w1.data()) v = 0.0;
    for (double& v : w.head_w2.data()) v = 0.0;
    std::fill(w.head_b1.begin(), w.head_b1.end(), 0.0);
    w.head_b2 = 1.7;
    CHECK(video_head(cq, cr, w) == doctest::Approx(1.0 / (1.0 + std::exp(-1.7))).epsilon(1e-12));
  }

  SUBCASE("random weights match a hand-rolled oracle") {
    Rng rng(13);
    std::vector<double> q(4), r(4);
    for (double& v : q) v = rng.gaussian();
    for (double& v : r) v = rng.gaussian();
    std::vector<double> joint;
    joint.insert(joint.end(), q.begin(), q.end());
    joint.insert(joint.end(), r.begin(), r.end());
    double z = w.head_b2;
    for (std::size_t j = 0; j < w.hidden; ++j) {
      double h = w.head_b1[j];
      for (std::size_t i = 0; i < 8; ++i) h += joint[i] * w.head_w1(i, j);
      z += std::max(0.0, h) * w.head_w2(j, 0);
    }
    const double expected = 1.0 / (1.0 + std::exp(-z));
    CHECK(video_head(q, r, w) == doctest::Approx(expected).epsilon(1e-6));
    CHECK(video_head(q, r, w) > 0.0);
    CHECK(video_head(q, r, w) < 1.0);
  }
}

TEST_CASE("enhance_sequences splits class tokens from frame rows") {
  Rng rng(14);
  const AttentionWeights w = make_random_weights(3, 8, 2, 1, 8);
  FeatureSequence q, r;
  q.video_id = "q";
  q.frames = random_mat(rng, 5, 8);
  r.video_id = "r";
  r.frames = random_mat(rng, 7, 8);

  const PairEnhancement out = enhance_sequences(q, r, w, AttnKernel::linear);
  CHECK(out.query_frames.rows() == 5);
  CHECK(out.ref_frames.rows() == 7);
  CHECK(out.class_q.size() == 8);
  CHECK(out.video_score > 0.0);
  CHECK(out.video_score < 1.0);

  // Matches the manual build_input -> enhance_pair -> video_head route.
  const EnhancedPair manual = enhance_pair(build_input(q, w.class_token),
                                           build_input(r, w.class_token), w, AttnKernel::linear);
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(out.class_q[j] == manual.query(0, j));
    CHECK(out.query_frames(3, j) == manual.query(4, j));
  }
  const double y = video_head(out.class_q, out.class_r, w);
  CHECK(out.video_score == y);
}

TEST_CASE("weights round-trip through the VCW1 file") {
  const AttentionWeights w = make_random_weights(77, 8, 2, 2, 12);
  const auto path = std::filesystem::temp_directory_path() / "copyloc_tests" / "w.vcw";
  std::filesystem::create_directories(path.parent_path());
  write_weights(path, w);
  const AttentionWeights back = read_weights(path);
  CHECK(back.dim == w.dim);
  CHECK(back.heads == w.heads);
  CHECK(back.layers.size() == w.layers.size());
  CHECK(back.hidden == w.hidden);
  for (std::size_t i = 0; i < w.dim; ++i)
    CHECK(back.class_token[i] == doctest::Approx(w.class_token[i]).epsilon(1e-7));
  CHECK(max_abs_diff(back.layers[1].cross_attn.wo, w.layers[1].cross_attn.wo) < 1e-7);
  CHECK(max_abs_diff(back.head_w1, w.head_w1) < 1e-7);

  // Enhancement through saved-then-loaded weights is unchanged (f32 file
  // precision dominates).
  Rng rng(5);
  const Mat a = random_mat(rng, 3, 8);
  const Mat b = random_mat(rng, 3, 8);
  const EnhancedPair e1 = enhance_pair(a, b, w, AttnKernel::linear);
  const EnhancedPair e2 = enhance_pair(a, b, back, AttnKernel::linear);
  CHECK(max_abs_diff(e1.query, e2.query) < 1e-4);
}

TEST_CASE("weight files reject corruption") {
  const AttentionWeights w = make_random_weights(8, 8, 2, 1, 4);
  const auto dir = std::filesystem::temp_directory_path() / "copyloc_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / "corrupt.vcw";
  write_weights(path, w);

  SUBCASE("truncated blob") {
    const auto size = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, size - 16);
    try {
      read_weights(path);
      FAIL("expected TruncatedFile");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::truncated_file);
    }
  }
  SUBCASE("trailing bytes") {
    std::ofstream os(path, std::ios::binary | std::ios::app);
    os.write("zz", 2);
    os.close();
    try {
      read_weights(path);
      FAIL("expected WeightShapeMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::weight_shape_mismatch);
    }
  }
  SUBCASE("wrong magic") {
    std::ofstream os(path, std::ios::binary);
    os.write("NOPE", 4);
    os.close();
    try {
      read_weights(path);
      FAIL("expected BadMagic");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::bad_magic);
    }
  }
}

TEST_CASE("weight validation rejects inconsistent shapes") {
  CHECK_THROWS_AS(make_random_weights(0, 10, 3, 1, 4), Error);  // 10 % 3 != 0
  AttentionWeights w = make_random_weights(0, 8, 2, 1, 4);
  w.class_token.pop_back();
  CHECK_THROWS_AS(w.validate(), Error);
}

TEST_CASE("make_random_weights is deterministic per seed") {
  const AttentionWeights a = make_random_weights(5, 8, 2, 1, 4);
  const AttentionWeights b = make_random_weights(5, 8, 2, 1, 4);
  CHECK(a.class_token == b.class_token);
  CHECK(a.layers[0].self_attn.wq[1].data() == b.layers[0].self_attn.wq[1].data());
}
