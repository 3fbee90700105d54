#include "finimg/eval/split.hpp"

#include "finimg/common/error.hpp"
#include "finimg/common/rng.hpp"

namespace finimg::eval {

SplitPlan split_dataset(std::size_t n, std::uint64_t seed) {
    if (n < 10) throw ContractError("split needs at least 10 samples, got " + std::to_string(n));
    // Integer forms of round-half-up(0.2 n) and round-half-up(0.1 m).
    const std::size_t test = (2 * n + 5) / 10;
    const std::size_t val = (n - test + 5) / 10;
    Rng rng(seed);
    const auto perm = rng.permutation(n);
    SplitPlan plan;
    plan.seed = seed;
    plan.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(test));
    plan.val.assign(perm.begin() + static_cast<std::ptrdiff_t>(test),
                    perm.begin() + static_cast<std::ptrdiff_t>(test + val));
    plan.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(test + val), perm.end());
    return plan;
}

}  // namespace finimg::eval
