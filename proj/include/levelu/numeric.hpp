#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "levelu/depgraph.hpp"
#include "levelu/error.hpp"
#include "levelu/resource_model.hpp"
#include "levelu/sparse.hpp"
#include "levelu/symbolic.hpp"

namespace levelu {

#ifdef NDEBUG
inline constexpr bool debug_build = false;
#else
inline constexpr bool debug_build = true;
#endif

/// Pivot |A_s(j,j)| fell to or below threshold * max |A_s(:,j)|.
class PivotError : public Error {
public:
    PivotError(Index column, double pivot, double column_max);
    Index column() const { return column_; }
    double pivot() const { return pivot_; }

private:
    Index column_;
    double pivot_;
};

/// L (unit diagonal, strictly lower slots) and U (diagonal and upper slots)
/// stored in place over the filled pattern.
template <class T>
struct LuFactors {
    std::shared_ptr<const FilledPattern> pattern;
    std::vector<T> values;

    Index n() const { return pattern->n(); }
    /// Stored value at (row, col), 0 when outside the pattern.
    T at(Index row, Index col) const
    {
        const auto slot = pattern->full.find(row, col);
        return slot ? values[*slot] : T{0};
    }
};

struct FactorOptions {
    /// Relative to the largest magnitude in the pivot's column.
    double zero_pivot_threshold = 1e-14;
    /// Ordered per-element accumulation (bitwise reproducible); otherwise
    /// updates are atomic and their order unspecified.
    bool deterministic = true;
    std::size_t worker_count = 1;
    /// Used to derive level plans when factor_parallel gets none.
    std::optional<ResourceModel> resource;
    /// Check every level for read-write conflicts while it runs.
    bool detect_races = debug_build;
};

struct FactorStats {
    std::vector<double> level_seconds;
    std::vector<KernelMode> level_modes;
    std::uint64_t flops = 0;
    Index peak_concurrent_columns = 0;
};

template <class T>
struct ParallelResult {
    LuFactors<T> factors;
    FactorStats stats;
};

/// Values of `a` placed into the slots of `fp`; fill-in slots start at 0.
template <class T>
std::vector<T> scatter_values(const CscMatrix& a, const FilledPattern& fp);

/// Column-by-column triangular solve followed by scaling of the L part.
template <class T>
LuFactors<T> factor_left_looking(const CscMatrix& a, std::shared_ptr<const FilledPattern> fp,
                                 const FactorOptions& opts = {});

/// Scale column j, then push its updates into every subcolumn, for
/// j = 0..n-1. Produces the same bits as factor_left_looking.
template <class T>
LuFactors<T> factor_right_looking_seq(const CscMatrix& a, std::shared_ptr<const FilledPattern> fp,
                                      const FactorOptions& opts = {});

/// A_s(i, dest) -= A_s(i, source) * A_s(source, dest) for every L row i of
/// `source`. Throws InternalError if a target slot is missing from the
/// pattern or (source, dest) is not a subcolumn pair.
template <class T>
void subcolumn_update(const FilledPattern& fp, std::span<T> values, Index dest, Index source);

/// Level-synchronous factorization. Levels run in order with a barrier
/// between them; columns inside a level run concurrently as allowed by the
/// level's plan. When `plans` is empty they are derived from
/// `opts.resource` (or a default ResourceModel).
template <class T>
ParallelResult<T> factor_parallel(const CscMatrix& a, std::shared_ptr<const FilledPattern> fp,
                                  const LevelSchedule& schedule, std::span<const LevelPlan> plans,
                                  const FactorOptions& opts = {});

/// Solves L y = b with the implicit unit diagonal.
template <class T>
std::vector<T> lower_solve(const LuFactors<T>& lu, std::span<const T> b);

/// Solves U x = y.
template <class T>
std::vector<T> upper_solve(const LuFactors<T>& lu, std::span<const T> y);

/// ||A - L U||_F / ||A||_F, accumulated in double.
template <class T>
double residual(const CscMatrix& a, const LuFactors<T>& lu);

/// y = A x
std::vector<double> multiply(const CscMatrix& a, std::span<const double> x);

/// FNV-1a over the raw bytes of the value array.
template <class T>
std::uint64_t checksum(const LuFactors<T>& lu);

}  // namespace levelu
