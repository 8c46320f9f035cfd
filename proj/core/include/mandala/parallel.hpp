#pragma once

#include <cstdint>
#include <functional>

namespace mandala {

/// Global worker cap for block-parallel loops. 0 means hardware concurrency.
/// The partitioning below never depends on this value, so results are
/// byte-identical at any thread count.
void set_max_threads(int n);
int max_threads();

/// Runs fn(begin, end) over [begin, end) split into fixed-size blocks.
/// Blocks are assigned to workers dynamically but the block boundaries are a
/// pure function of (begin, end, block), and each call must write only to
/// state owned by its block.
void parallel_for_blocks(std::int64_t begin, std::int64_t end,
                         std::int64_t block,
                         const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace mandala
