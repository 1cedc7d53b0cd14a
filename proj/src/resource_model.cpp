#include "levelu/resource_model.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace levelu {

void ResourceModel::validate() const
{
    if (total_warps < 1) {
        throw DimensionError("total_warps must be at least 1");
    }
    if (stream_threshold < 1) {
        throw DimensionError("stream_threshold must be at least 1");
    }
    if (scalar_size_bytes == 0) {
        throw DimensionError("scalar_size_bytes must be positive");
    }
}

Index warps_per_block(Index level_size, const ResourceModel& rm)
{
    const Index raw = std::max<Index>(1, rm.total_warps / std::max<Index>(1, level_size));
    const auto pow2 = static_cast<Index>(std::bit_floor(static_cast<std::uint32_t>(raw)));
    return std::clamp<Index>(pow2, 2, ResourceModel::max_warps_per_block);
}

Index max_parallel_columns(Index n, const ResourceModel& rm)
{
    const std::uint64_t per_column = static_cast<std::uint64_t>(std::max<Index>(1, n)) * rm.scalar_size_bytes;
    const std::uint64_t columns = rm.memory_budget_bytes / per_column;
    return static_cast<Index>(std::clamp<std::uint64_t>(columns, 1, INT32_MAX));
}

KernelMode select_mode(Index level_size, const ResourceModel& rm)
{
    if (level_size <= rm.stream_threshold) {
        return KernelMode::Stream;
    }
    if (warps_per_block(level_size, rm) == ResourceModel::max_warps_per_block) {
        return KernelMode::LargeBlock;
    }
    return KernelMode::SmallBlock;
}

std::vector<LevelPlan> plan_schedule(const LevelSchedule& s, const LevelStats& stats, Index n,
                                     const ResourceModel& rm)
{
    rm.validate();
    if (stats.levels.size() != s.levels.size()) {
        throw DimensionError("level stats describe " + std::to_string(stats.levels.size())
                             + " levels, schedule has " + std::to_string(s.levels.size()));
    }
    const Index memory_cap = max_parallel_columns(n, rm);
    std::vector<LevelPlan> plans;
    plans.reserve(s.levels.size());
    for (std::size_t l = 0; l < s.levels.size(); ++l) {
        const auto size = static_cast<Index>(s.levels[l].size());
        if (stats.levels[l].size != size) {
            throw DimensionError("level stats disagree with schedule at level " + std::to_string(l));
        }
        LevelPlan p;
        p.mode = select_mode(size, rm);
        p.max_parallel_columns = memory_cap;
        if (p.mode == KernelMode::Stream) {
            p.warps_per_column = ResourceModel::max_warps_per_block;
            p.concurrent_column_pipelines = std::min(size, ResourceModel::stream_count);
            p.column_slots = std::min(p.concurrent_column_pipelines, memory_cap);
        } else {
            p.warps_per_column = warps_per_block(size, rm);
            const Index warp_cap = std::max<Index>(1, rm.total_warps / p.warps_per_column);
            p.column_slots = std::min({size, memory_cap, warp_cap});
        }
        plans.push_back(p);
    }
    return plans;
}

}  // namespace levelu
