#pragma once

#include "copyloc/attention.hpp"
#include "copyloc/sim_matrix.hpp"

namespace copyloc {

inline constexpr double kDefaultTau = 0.1;
inline constexpr std::size_t kDefaultResize = 640;

// S[m,n] = (1/tau) * <f_m / |f_m|, f_n / |f_n|>. Rows are re-normalized
// to unit L2 first so the temperature acts on a bounded cosine.
// Throws zero_vector if any frame has zero norm.
SimMatrix cosine_matrix(const Mat& query_frames, const Mat& ref_frames, double tau = kDefaultTau);

// Overload that drops the class-token rows of an enhanced pair.
SimMatrix cosine_matrix(const EnhancedPair& enhanced, double tau = kDefaultTau);

// Soft mutual nearest neighbor matching: elementwise product of the
// row-wise and column-wise softmax of S. Softmaxes use max-subtraction.
SimMatrix dual_softmax(const SimMatrix& raw);

// Bilinear resize with the align-corners-false convention; scale factors
// are updated so box coordinates still map back to seconds.
SimMatrix resize_bilinear(const SimMatrix& src, std::size_t target_rows, std::size_t target_cols);

}  // namespace copyloc
