#include "copyloc/attention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace copyloc {

AttnKernel parse_kernel(const std::string& name) {
  if (name == "vanilla") return AttnKernel::vanilla;
  if (name == "linear") return AttnKernel::linear;
  fail(Errc::bad_argument, "unknown attention kernel '" + name + "'");
}

namespace {

void check_mha_shapes(const MhaWeights& w, std::size_t dim, std::size_t heads) {
  const std::size_t d_head = dim / heads;
  if (w.wq.size() != heads || w.wk.size() != heads || w.wv.size() != heads)
    fail(Errc::weight_shape_mismatch, "per-head projection count != head count");
  for (std::size_t h = 0; h < heads; ++h) {
    for (const Mat* m : {&w.wq[h], &w.wk[h], &w.wv[h]}) {
      if (m->rows() != dim || m->cols() != d_head)
        fail(Errc::weight_shape_mismatch, "head projection must be dim x dim/heads");
      if (!m->all_finite()) fail(Errc::nonfinite_value, "non-finite attention weight");
    }
  }
  if (w.wo.rows() != dim || w.wo.cols() != dim)
    fail(Errc::weight_shape_mismatch, "output projection must be dim x dim");
  if (!w.wo.all_finite()) fail(Errc::nonfinite_value, "non-finite attention weight");
}

double elu_plus_one(double x) { return x >= 0.0 ? x + 1.0 : std::exp(x); }

Mat phi(const Mat& m) {
  Mat out = m;
  for (double& v : out.data()) v = elu_plus_one(v);
  return out;
}

}  // namespace

void AttentionWeights::validate() const {
  if (dim == 0 || heads == 0) fail(Errc::weight_shape_mismatch, "dim and heads must be positive");
  if (dim % heads != 0)
    fail(Errc::weight_shape_mismatch, "dim " + std::to_string(dim) + " not divisible by heads " +
                                          std::to_string(heads));
  if (class_token.size() != dim)
    fail(Errc::weight_shape_mismatch, "class token size != dim");
  for (double v : class_token)
    if (!std::isfinite(v)) fail(Errc::nonfinite_value, "non-finite class token");
  for (const auto& layer : layers) {
    check_mha_shapes(layer.self_attn, dim, heads);
    check_mha_shapes(layer.cross_attn, dim, heads);
  }
  if (head_w1.rows() != 2 * dim || head_w1.cols() != hidden)
    fail(Errc::weight_shape_mismatch, "video head W1 must be 2*dim x hidden");
  if (head_b1.size() != hidden) fail(Errc::weight_shape_mismatch, "video head b1 size != hidden");
  if (head_w2.rows() != hidden || head_w2.cols() != 1)
    fail(Errc::weight_shape_mismatch, "video head W2 must be hidden x 1");
  if (!head_w1.all_finite() || !head_w2.all_finite() || !std::isfinite(head_b2))
    fail(Errc::nonfinite_value, "non-finite video head weight");
  for (double v : head_b1)
    if (!std::isfinite(v)) fail(Errc::nonfinite_value, "non-finite video head bias");
}

Mat temporal_encoding(std::size_t n, std::size_t d) {
  if (d % 2 != 0) fail(Errc::odd_dimension, "temporal encoding needs even dim, got " + std::to_string(d));
  Mat enc(n, d);
  for (std::size_t pos = 0; pos < n; ++pos) {
    for (std::size_t i = 0; i < d / 2; ++i) {
      const double rate = std::pow(10000.0, 2.0 * static_cast<double>(i) / static_cast<double>(d));
      const double angle = static_cast<double>(pos) / rate;
      enc(pos, 2 * i) = std::sin(angle);
      enc(pos, 2 * i + 1) = std::cos(angle);
    }
  }
  return enc;
}

Mat build_input(const FeatureSequence& seq, std::span<const double> f_class) {
  if (f_class.size() != seq.dim())
    fail(Errc::dim_mismatch, "class token dim " + std::to_string(f_class.size()) +
                                 " != feature dim " + std::to_string(seq.dim()));
  const std::size_t n = seq.length();
  const std::size_t d = seq.dim();
  const Mat enc = temporal_encoding(n + 1, d);
  Mat input(n + 1, d);
  for (std::size_t j = 0; j < d; ++j) input(0, j) = f_class[j] + enc(0, j);
  for (std::size_t m = 1; m <= n; ++m)
    for (std::size_t j = 0; j < d; ++j) input(m, j) = seq.frames(m - 1, j) + enc(m, j);
  return input;
}

Mat softmax_attention(const Mat& q, const Mat& k, const Mat& v) {
  if (q.cols() != k.cols()) fail(Errc::dim_mismatch, "Q/K feature dims differ");
  if (k.rows() != v.rows()) fail(Errc::dim_mismatch, "K/V row counts differ");
  Mat out(q.rows(), v.cols());
  std::vector<double> logits(k.rows());
  for (std::size_t i = 0; i < q.rows(); ++i) {
    const auto qi = q.row(i);
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k.rows(); ++j) {
      logits[j] = dot(qi, k.row(j));
      max_logit = std::max(max_logit, logits[j]);
    }
    double denom = 0.0;
    for (double& l : logits) {
      l = std::exp(l - max_logit);
      denom += l;
    }
    auto oi = out.row(i);
    for (std::size_t j = 0; j < k.rows(); ++j) {
      const double w = logits[j] / denom;
      const auto vj = v.row(j);
      for (std::size_t c = 0; c < v.cols(); ++c) oi[c] += w * vj[c];
    }
  }
  return out;
}

Mat linear_attention(const Mat& q, const Mat& k, const Mat& v) {
  if (q.cols() != k.cols()) fail(Errc::dim_mismatch, "Q/K feature dims differ");
  if (k.rows() != v.rows()) fail(Errc::dim_mismatch, "K/V row counts differ");
  const Mat pq = phi(q);
  const Mat pk = phi(k);

  // kv_sum = sum_j phi(k_j) v_j^T  (d_k x d_v),  k_sum = sum_j phi(k_j)
  Mat kv_sum(k.cols(), v.cols());
  std::vector<double> k_sum(k.cols(), 0.0);
  for (std::size_t j = 0; j < k.rows(); ++j) {
    const auto kj = pk.row(j);
    const auto vj = v.row(j);
    for (std::size_t a = 0; a < k.cols(); ++a) {
      k_sum[a] += kj[a];
      if (kj[a] == 0.0) continue;
      auto kva = kv_sum.row(a);
      for (std::size_t b = 0; b < v.cols(); ++b) kva[b] += kj[a] * vj[b];
    }
  }

  Mat out(q.rows(), v.cols());
  for (std::size_t i = 0; i < q.rows(); ++i) {
    const auto qi = pq.row(i);
    const double denom = dot(qi, k_sum);
    // phi > 0 for finite inputs, so the denominator cannot vanish.
    if (!(denom > 0.0)) fail(Errc::zero_denominator, "linear attention normalizer vanished");
    auto oi = out.row(i);
    for (std::size_t a = 0; a < q.cols(); ++a) {
      if (qi[a] == 0.0) continue;
      const auto kva = kv_sum.row(a);
      for (std::size_t b = 0; b < v.cols(); ++b) oi[b] += qi[a] * kva[b];
    }
    for (std::size_t b = 0; b < v.cols(); ++b) oi[b] /= denom;
  }
  return out;
}

Mat multi_head_attention(const Mat& q_in, const Mat& kv_in, const MhaWeights& w,
                         std::size_t heads, AttnKernel kernel) {
  if (q_in.cols() != kv_in.cols()) fail(Errc::dim_mismatch, "stream dims differ");
  const std::size_t dim = q_in.cols();
  const std::size_t d_head = dim / heads;
  Mat concat(q_in.rows(), dim);
  for (std::size_t h = 0; h < heads; ++h) {
    const Mat qh = matmul(q_in, w.wq[h]);
    const Mat kh = matmul(kv_in, w.wk[h]);
    const Mat vh = matmul(kv_in, w.wv[h]);
    const Mat oh =
        kernel == AttnKernel::vanilla ? softmax_attention(qh, kh, vh) : linear_attention(qh, kh, vh);
    for (std::size_t i = 0; i < oh.rows(); ++i)
      for (std::size_t c = 0; c < d_head; ++c) concat(i, h * d_head + c) = oh(i, c);
  }
  return matmul(concat, w.wo);
}

namespace {

void add_in_place(Mat& target, const Mat& delta) {
  for (std::size_t idx = 0; idx < target.data().size(); ++idx)
    target.data()[idx] += delta.data()[idx];
}

}  // namespace

EnhancedPair enhance_pair(const Mat& fq_input, const Mat& fr_input, const AttentionWeights& w,
                          AttnKernel kernel) {
  w.validate();
  if (fq_input.cols() != w.dim || fr_input.cols() != w.dim)
    fail(Errc::dim_mismatch, "input dim != weight dim");

  Mat x = fq_input;
  Mat y = fr_input;
  for (const auto& layer : w.layers) {
    Mat xs = x;
    add_in_place(xs, multi_head_attention(x, x, layer.self_attn, w.heads, kernel));
    Mat ys = y;
    add_in_place(ys, multi_head_attention(y, y, layer.self_attn, w.heads, kernel));
    Mat xc = xs;
    add_in_place(xc, multi_head_attention(xs, ys, layer.cross_attn, w.heads, kernel));
    Mat yc = ys;
    add_in_place(yc, multi_head_attention(ys, xs, layer.cross_attn, w.heads, kernel));
    x = std::move(xc);
    y = std::move(yc);
  }
  return {std::move(x), std::move(y)};
}

double video_head(std::span<const double> class_q, std::span<const double> class_r,
                  const AttentionWeights& w) {
  if (class_q.size() != w.dim || class_r.size() != w.dim)
    fail(Errc::dim_mismatch, "class token dim != weight dim");
  std::vector<double> joint(2 * w.dim);
  std::copy(class_q.begin(), class_q.end(), joint.begin());
  std::copy(class_r.begin(), class_r.end(), joint.begin() + w.dim);

  std::vector<double> hidden(w.hidden, 0.0);
  for (std::size_t i = 0; i < joint.size(); ++i) {
    if (joint[i] == 0.0) continue;
    const auto row = w.head_w1.row(i);
    for (std::size_t j = 0; j < w.hidden; ++j) hidden[j] += joint[i] * row[j];
  }
  double z = w.head_b2;
  for (std::size_t j = 0; j < w.hidden; ++j) {
    const double a = std::max(0.0, hidden[j] + w.head_b1[j]);
    z += a * w.head_w2(j, 0);
  }
  return 1.0 / (1.0 + std::exp(-z));
}

PairEnhancement enhance_sequences(const FeatureSequence& query, const FeatureSequence& ref,
                                  const AttentionWeights& w, AttnKernel kernel) {
  const Mat fq = build_input(query, w.class_token);
  const Mat fr = build_input(ref, w.class_token);
  EnhancedPair enhanced = enhance_pair(fq, fr, w, kernel);

  PairEnhancement out;
  out.class_q.assign(enhanced.query.row(0).begin(), enhanced.query.row(0).end());
  out.class_r.assign(enhanced.ref.row(0).begin(), enhanced.ref.row(0).end());
  out.query_frames = Mat(query.length(), w.dim);
  for (std::size_t i = 0; i < query.length(); ++i)
    for (std::size_t j = 0; j < w.dim; ++j) out.query_frames(i, j) = enhanced.query(i + 1, j);
  out.ref_frames = Mat(ref.length(), w.dim);
  for (std::size_t i = 0; i < ref.length(); ++i)
    for (std::size_t j = 0; j < w.dim; ++j) out.ref_frames(i, j) = enhanced.ref(i + 1, j);
  out.video_score = video_head(out.class_q, out.class_r, w);
  return out;
}

}  // namespace copyloc
