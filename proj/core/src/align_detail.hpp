#pragma once

#include "copyloc/align.hpp"

namespace copyloc::detail {

SegmentBox cells_to_box(std::size_t m0, std::size_t m1, std::size_t n0, std::size_t n1,
                        const SimMatrix& s, double score);

void sort_by_score(std::vector<SegmentBox>& boxes);

}  // namespace copyloc::detail
