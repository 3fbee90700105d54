#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace finimg::eval {

struct SplitPlan {
    std::uint64_t seed = 0;
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

/// Seeded permutation of 0..n-1 cut into test (20%, rounded half up), then
/// validation (10% of the rest, rounded half up), then train. n >= 10.
SplitPlan split_dataset(std::size_t n, std::uint64_t seed);

}  // namespace finimg::eval
