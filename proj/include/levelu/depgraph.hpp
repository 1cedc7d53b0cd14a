#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "levelu/error.hpp"
#include "levelu/kernel_mode.hpp"
#include "levelu/symbolic.hpp"

namespace levelu {

enum class DependencyMethod { Upward, DoubleUExact, Relaxed };

std::string_view to_string(DependencyMethod m);
/// Accepts "upward", "exact", "relaxed".
std::optional<DependencyMethod> parse_dependency_method(std::string_view s);

/// For each column j, the sorted columns i < j it must wait for.
class DependencyGraph {
public:
    DependencyGraph(DependencyMethod method, std::vector<Offset> ptr, std::vector<Index> deps);

    DependencyMethod method() const { return method_; }
    Index n() const { return static_cast<Index>(ptr_.size()) - 1; }
    Offset edge_count() const { return ptr_.back(); }

    std::span<const Index> deps(Index j) const
    {
        return {deps_.data() + ptr_[j], static_cast<std::size_t>(ptr_[j + 1] - ptr_[j])};
    }
    bool depends(Index j, Index i) const;

private:
    DependencyMethod method_;
    std::vector<Offset> ptr_;
    std::vector<Index> deps_;
};

/// Columns grouped so that no column depends on another in its own level
/// or a later one.
struct LevelSchedule {
    std::vector<std::vector<Index>> levels;
    std::vector<Index> level_of;

    std::size_t level_count() const { return levels.size(); }

    /// Throws StructureError unless `levels` partitions {0..n-1} and
    /// `level_of` agrees with it.
    void validate(Index n) const;

    /// One column per level, in index order.
    static LevelSchedule sequential(Index n);
};

struct Hazard {
    Index writer = 0;
    Index reader = 0;
    Index row = 0;
    Index col = 0;
    Index level = 0;

    friend bool operator==(const Hazard&, const Hazard&) = default;
};

struct HazardReport {
    std::vector<Hazard> hazards;

    bool empty() const { return hazards.empty(); }
};

/// Raised when a level of a running factorization contains a read-write
/// conflict.
class ScheduleHazardError : public Error {
public:
    explicit ScheduleHazardError(std::vector<Hazard> hazards);
    const std::vector<Hazard>& hazards() const { return hazards_; }

private:
    std::vector<Hazard> hazards_;
};

struct LevelInfo {
    Index size = 0;
    Index max_subcolumns = 0;
    std::optional<KernelMode> mode;
};

struct LevelStats {
    std::vector<LevelInfo> levels;
};

/// j depends on i when A_s(i, j) != 0 above the diagonal and column i of L
/// is non-empty. Sufficient for left-looking only.
DependencyGraph detect_upward(const FilledPattern& fp);

/// Upward dependencies plus the double-U read-write conflicts found by the
/// row-intersection triple loop. Row index sets come from `fp.csr`.
DependencyGraph detect_double_u_exact(const FilledPattern& fp);

/// Up-looking in U plus left-looking along each row of L. A superset of
/// detect_double_u_exact in time linear in nnz.
DependencyGraph detect_relaxed(const FilledPattern& fp);

DependencyGraph detect(const FilledPattern& fp, DependencyMethod method);

LevelSchedule levelize(const DependencyGraph& g);

/// For each pair of columns sharing a level, reports every element the
/// first writes during its submatrix update that the second reads: its
/// row right of the diagonal, its pivot, or its L column.
HazardReport simulate_hazards(const FilledPattern& fp, const LevelSchedule& s);

LevelStats level_stats(const FilledPattern& fp, const LevelSchedule& s);

}  // namespace levelu
