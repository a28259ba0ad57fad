#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "copyloc/feature.hpp"
#include "copyloc/mat.hpp"

namespace copyloc {

enum class AttnKernel { vanilla, linear };

AttnKernel parse_kernel(const std::string& name);

// Multi-head attention parameters for one module: per-head query/key/value
// projections (d x d_head) plus one output projection (d x d) applied to
// the concatenated heads.
struct MhaWeights {
  std::vector<Mat> wq, wk, wv;
  Mat wo;
};

// Forward-pass weights for the whole enhancement stack. One shared class
// token is prepended to both streams; each layer holds a self-attention
// and a cross-attention module used symmetrically on the two streams.
// The video head is an MLP with one hidden layer on the concatenated
// class tokens.
struct AttentionWeights {
  std::size_t dim = kDefaultFeatureDim;
  std::size_t heads = 8;
  std::size_t hidden = kDefaultFeatureDim;
  std::vector<double> class_token;  // dim

  struct Layer {
    MhaWeights self_attn;
    MhaWeights cross_attn;
  };
  std::vector<Layer> layers;

  Mat head_w1;  // 2*dim x hidden
  std::vector<double> head_b1;
  Mat head_w2;  // hidden x 1
  double head_b2 = 0.0;

  std::size_t head_dim() const { return heads ? dim / heads : 0; }
  void validate() const;
};

// Fixed sinusoidal temporal encoding:
//   entry(pos, 2i)   = sin(pos / 10000^(2i/d))
//   entry(pos, 2i+1) = cos(pos / 10000^(2i/d))
// d must be even.
Mat temporal_encoding(std::size_t n, std::size_t d);

// Prepends the class token and adds the temporal encoding; output is
// (n+1) x d with the class token at row 0.
Mat build_input(const FeatureSequence& seq, std::span<const double> f_class);

// softmax(Q K^T) V, row-stable softmax, no scaling.
Mat softmax_attention(const Mat& q, const Mat& k, const Mat& v);

// Linear-kernel attention with feature map phi(x) = elu(x) + 1:
//   out_i = phi(q_i) (sum_j phi(k_j) v_j^T) / (phi(q_i) . sum_j phi(k_j))
// computed in the factored form, so cost is linear in sequence length.
Mat linear_attention(const Mat& q, const Mat& k, const Mat& v);

// One multi-head attention call with the chosen kernel.
Mat multi_head_attention(const Mat& q_in, const Mat& kv_in, const MhaWeights& w,
                         std::size_t heads, AttnKernel kernel);

// Runs the stacked self/cross attention layers on a pair of input
// matrices (class-token row included). Each sublayer output is added
// residually to its input, so an empty stack is the identity and the
// operation is symmetric in its two arguments.
struct EnhancedPair {
  Mat query;  // same shape as the query input
  Mat ref;
};
EnhancedPair enhance_pair(const Mat& fq_input, const Mat& fr_input, const AttentionWeights& w,
                          AttnKernel kernel);

// sigmoid(affine2(relu(affine1([class_q; class_r])))), in (0, 1).
double video_head(std::span<const double> class_q, std::span<const double> class_r,
                  const AttentionWeights& w);

// Convenience wrapper for whole sequences: builds inputs, runs the stack,
// splits class tokens from frame rows and evaluates the video head.
struct PairEnhancement {
  Mat query_frames;  // n_q x d
  Mat ref_frames;    // n_r x d
  std::vector<double> class_q;
  std::vector<double> class_r;
  double video_score = 0.0;
};
PairEnhancement enhance_sequences(const FeatureSequence& query, const FeatureSequence& ref,
                                  const AttentionWeights& w, AttnKernel kernel);

// Weight file, magic "VCW1":
//   "VCW1" | u32 manifest_len | JSON manifest {dim, heads, layers, hidden} |
//   little-endian f32 blob
// Blob order: class_token; then per layer: self.wq[0..h-1], self.wk[...],
// self.wv[...], self.wo, cross.wq[...], cross.wk[...], cross.wv[...],
// cross.wo; then head_w1, head_b1, head_w2, head_b2. Matrices row-major.
AttentionWeights read_weights(const std::filesystem::path& path);
void write_weights(const std::filesystem::path& path, const AttentionWeights& w);

// Seeded random weights (Gaussian, scaled by 1/sqrt(dim)) for tests and
// demos; this artifact never trains.
AttentionWeights make_random_weights(std::uint64_t seed, std::size_t dim, std::size_t heads,
                                     std::size_t layers, std::size_t hidden);

}  // namespace copyloc
