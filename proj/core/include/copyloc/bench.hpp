#pragma once

#include <cstdint>
#include <vector>

#include "copyloc/attention.hpp"

namespace copyloc {

struct KernelTiming {
  std::size_t length = 0;
  double vanilla_ms = 0.0;
  double linear_ms = 0.0;
};

// Times one softmax_attention and one linear_attention call on random
// n x dim inputs for each length, best of `repeats` runs. The checksum
// keeps the optimizer from discarding the work.
std::vector<KernelTiming> time_attention_scaling(const std::vector<std::size_t>& lengths,
                                                 std::size_t dim, int repeats,
                                                 std::uint64_t seed = 0);

}  // namespace copyloc
