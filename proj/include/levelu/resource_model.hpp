#pragma once

#include <cstdint>
#include <vector>

#include "levelu/depgraph.hpp"
#include "levelu/kernel_mode.hpp"

namespace levelu {

/// Simulated device budget. A "warp" is an abstract chunk of 32 lanes of
/// subcolumn work; it bounds concurrency but is not executed in lockstep.
struct ResourceModel {
    static constexpr Index warp_width = 32;
    static constexpr Index max_warps_per_block = 32;
    static constexpr Index stream_count = 16;

    Index total_warps = 96;
    Index stream_threshold = 16;
    std::uint64_t memory_budget_bytes = std::uint64_t{1} << 30;
    std::uint64_t scalar_size_bytes = sizeof(double);

    /// Throws DimensionError on a zero warp count, threshold or scalar size.
    void validate() const;
};

struct LevelPlan {
    KernelMode mode = KernelMode::SmallBlock;
    /// Warps given to each column's block (a whole block per subcolumn in
    /// Stream mode, recorded as 32).
    Index warps_per_column = 2;
    /// Memory limit on columns in flight, each holding a dense length-n cache.
    Index max_parallel_columns = 1;
    /// Streams used in Stream mode; 0 otherwise.
    Index concurrent_column_pipelines = 0;
    /// Columns actually allowed in flight at once for this level.
    Index column_slots = 1;
};

/// total_warps / level_size, floored to a power of two and clamped to [2, 32].
Index warps_per_block(Index level_size, const ResourceModel& rm);

/// memory_budget / (n * scalar_size), at least 1.
Index max_parallel_columns(Index n, const ResourceModel& rm);

/// Stream for levels no larger than the stream threshold, LargeBlock when a
/// level gets full 32-warp blocks, SmallBlock otherwise.
KernelMode select_mode(Index level_size, const ResourceModel& rm);

std::vector<LevelPlan> plan_schedule(const LevelSchedule& s, const LevelStats& stats, Index n,
                                     const ResourceModel& rm);

}  // namespace levelu
