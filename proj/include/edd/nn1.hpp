#pragma once

#include <vector>

#include "edd/common.hpp"
#include "edd/segmentation.hpp"

namespace edd {

// One-nearest-neighbour with squared Euclidean distance over the flattened
// 40x266 window; ties resolve to the earliest training index.
State nn1_classify(const std::vector<Window>& train, const Window& query);

std::vector<State> nn1_classify_batch(const std::vector<Window>& train,
                                      const std::vector<Window>& queries);

}  // namespace edd
