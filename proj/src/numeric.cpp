#include "levelu/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <mutex>
#include <string>
#include <tuple>

#include "levelu/worker_pool.hpp"

namespace levelu {

namespace {

// Element access used by the shared kernels. The sequential paths use plain
// loads and stores; the unordered parallel path makes every access atomic
// so concurrent subcolumn updates into one slot compose.
struct PlainAccess {
    template <class T>
    static T load(const T& x)
    {
        return x;
    }
    template <class T>
    static void store(T& x, T v)
    {
        x = v;
    }
    template <class T>
    static void subtract(T& x, T v)
    {
        x -= v;
    }
};

struct AtomicAccess {
    template <class T>
    static T load(const T& x)
    {
        return std::atomic_ref<T>(const_cast<T&>(x)).load(std::memory_order_relaxed);
    }
    template <class T>
    static void store(T& x, T v)
    {
        std::atomic_ref<T>(x).store(v, std::memory_order_relaxed);
    }
    template <class T>
    static void subtract(T& x, T v)
    {
        std::atomic_ref<T>(x).fetch_sub(v, std::memory_order_relaxed);
    }
};

template <class T>
void check_pivot(Index j, T pivot, T column_max, double threshold)
{
    const double p = static_cast<double>(pivot);
    if (!std::isfinite(p) || !(std::abs(p) > threshold * static_cast<double>(column_max))) {
        throw PivotError(j, p, static_cast<double>(column_max));
    }
}

// Divides the L part of column j by its pivot. Returns the flop count.
template <class Access, class T>
std::uint64_t scale_column(const FilledPattern& fp, T* v, Index j, double threshold)
{
    const auto& cp = fp.full.col_ptr();
    T column_max{0};
    for (Offset p = cp[j]; p < cp[j + 1]; ++p) {
        column_max = std::max(column_max, std::abs(Access::load(v[p])));
    }
    const T pivot = Access::load(v[fp.diag_pos[j]]);
    check_pivot(j, pivot, column_max, threshold);
    for (Offset p = fp.l_begin(j); p < fp.l_end(j); ++p) {
        Access::store(v[p], Access::load(v[p]) / pivot);
    }
    return static_cast<std::uint64_t>(fp.l_end(j) - fp.l_begin(j));
}

// Subcolumn update of `dest` by factorized column `source`, whose multiplier
// A_s(source, dest) lives at `mult_slot`.
template <class Access, class T>
std::uint64_t push_update(const FilledPattern& fp, T* v, Index source, Offset mult_slot, Index dest)
{
    const T u = Access::load(v[mult_slot]);
    const Index* rows = fp.full.row_idx().data();
    const Offset end = fp.full.col_ptr()[dest + 1];
    Offset p = std::lower_bound(rows + fp.full.col_ptr()[dest], rows + end, source + 1) - rows;
    for (Offset q = fp.l_begin(source); q < fp.l_end(source); ++q) {
        const Index i = rows[q];
        while (p < end && rows[p] < i) {
            ++p;
        }
        if (p == end || rows[p] != i) {
            throw InternalError("fill-in slot (" + std::to_string(i) + ", " + std::to_string(dest)
                                + ") missing from the filled pattern");
        }
        Access::subtract(v[p], Access::load(v[q]) * u);
    }
    return 2 * static_cast<std::uint64_t>(fp.l_end(source) - fp.l_begin(source));
}

// Left-looking computation of column k in a dense length-n workspace that
// is all zeros on entry and on exit.
template <class T>
std::uint64_t pull_column(const FilledPattern& fp, T* v, Index k, std::vector<T>& x, double threshold)
{
    const auto& cp = fp.full.col_ptr();
    const Index* rows = fp.full.row_idx().data();
    for (Offset p = cp[k]; p < cp[k + 1]; ++p) {
        x[rows[p]] = v[p];
    }

    std::uint64_t flops = 0;
    for (Offset p = cp[k]; p < fp.diag_pos[k]; ++p) {
        const Index s = rows[p];
        const T u = x[s];
        for (Offset q = fp.l_begin(s); q < fp.l_end(s); ++q) {
            x[rows[q]] -= v[q] * u;
        }
        flops += 2 * static_cast<std::uint64_t>(fp.l_end(s) - fp.l_begin(s));
    }

    T column_max{0};
    for (Offset p = cp[k]; p < cp[k + 1]; ++p) {
        column_max = std::max(column_max, std::abs(x[rows[p]]));
    }
    const T pivot = x[k];
    try {
        check_pivot(k, pivot, column_max, threshold);
    } catch (...) {
        for (Offset p = cp[k]; p < cp[k + 1]; ++p) {
            x[rows[p]] = T{0};
        }
        throw;
    }
    for (Offset p = fp.l_begin(k); p < fp.l_end(k); ++p) {
        x[rows[p]] = x[rows[p]] / pivot;
    }
    flops += static_cast<std::uint64_t>(fp.l_end(k) - fp.l_begin(k));

    for (Offset p = cp[k]; p < cp[k + 1]; ++p) {
        v[p] = x[rows[p]];
        x[rows[p]] = T{0};
    }
    return flops;
}

// Elements column j would write during its submatrix update that another
// column of the same level reads.
void scan_conflicts(const FilledPattern& fp, const LevelSchedule& s, Index level, Index j, std::vector<Hazard>& out)
{
    const auto subcolumns = fp.subcolumns(j);
    for (const Index i : fp.l_rows(j)) {
        for (const Index k : subcolumns) {
            const Index reader = std::min(i, k);
            if (s.level_of[reader] == level) {
                out.push_back({j, reader, i, k, level});
            }
        }
    }
}

std::shared_ptr<const FilledPattern> require(std::shared_ptr<const FilledPattern> fp, const CscMatrix& a)
{
    if (!fp) {
        throw InternalError("null filled pattern");
    }
    if (fp->n() != a.n()) {
        throw DimensionError("filled pattern order " + std::to_string(fp->n()) + " does not match matrix order "
                             + std::to_string(a.n()));
    }
    return fp;
}

}  // namespace

PivotError::PivotError(Index column, double pivot, double column_max)
    : Error("pivot failure at column " + std::to_string(column) + ": |" + std::to_string(pivot)
            + "| too small against column max " + std::to_string(column_max)),
      column_(column),
      pivot_(pivot)
{
}

template <class T>
std::vector<T> scatter_values(const CscMatrix& a, const FilledPattern& fp)
{
    if (a.n() != fp.n()) {
        throw DimensionError("matrix and pattern orders differ");
    }
    std::vector<T> v(static_cast<std::size_t>(fp.nnz()), T{0});
    for (Index j = 0; j < a.n(); ++j) {
        const auto dest = fp.full.column(j);
        std::size_t q = 0;
        for (Offset p = a.pattern.col_ptr()[j]; p < a.pattern.col_ptr()[j + 1]; ++p) {
            const Index i = a.pattern.row_idx()[p];
            while (q < dest.size() && dest[q] < i) {
                ++q;
            }
            if (q == dest.size() || dest[q] != i) {
                throw InternalError("entry (" + std::to_string(i) + ", " + std::to_string(j)
                                    + ") is outside the filled pattern");
            }
            v[fp.full.col_ptr()[j] + q] = static_cast<T>(a.values[p]);
        }
    }
    return v;
}

template <class T>
LuFactors<T> factor_left_looking(const CscMatrix& a, std::shared_ptr<const FilledPattern> fp,
                                 const FactorOptions& opts)
{
    fp = require(std::move(fp), a);
    LuFactors<T> lu{fp, scatter_values<T>(a, *fp)};
    std::vector<T> x(fp->n(), T{0});
    for (Index k = 0; k < fp->n(); ++k) {
        pull_column(*fp, lu.values.data(), k, x, opts.zero_pivot_threshold);
    }
    return lu;
}

template <class T>
LuFactors<T> factor_right_looking_seq(const CscMatrix& a, std::shared_ptr<const FilledPattern> fp,
                                      const FactorOptions& opts)
{
    fp = require(std::move(fp), a);
    LuFactors<T> lu{fp, scatter_values<T>(a, *fp)};
    T* v = lu.values.data();
    for (Index j = 0; j < fp->n(); ++j) {
        scale_column<PlainAccess>(*fp, v, j, opts.zero_pivot_threshold);
        const auto subcolumns = fp->subcolumns(j);
        for (std::size_t p = 0; p < subcolumns.size(); ++p) {
            push_update<PlainAccess>(*fp, v, j, fp->subcolumn_slot(j, p), subcolumns[p]);
        }
    }
    return lu;
}

template <class T>
void subcolumn_update(const FilledPattern& fp, std::span<T> values, Index dest, Index source)
{
    if (static_cast<Offset>(values.size()) != fp.nnz()) {
        throw DimensionError("value array does not match the filled pattern");
    }
    const auto slot = source < dest ? fp.full.find(source, dest) : std::nullopt;
    if (!slot) {
        throw InternalError("column " + std::to_string(dest) + " is not a subcolumn of " + std::to_string(source));
    }
    push_update<PlainAccess>(fp, values.data(), source, *slot, dest);
}

template <class T>
ParallelResult<T> factor_parallel(const CscMatrix& a, std::shared_ptr<const FilledPattern> fp,
                                  const LevelSchedule& schedule, std::span<const LevelPlan> plans,
                                  const FactorOptions& opts)
{
    fp = require(std::move(fp), a);
    const FilledPattern& pattern = *fp;
    schedule.validate(pattern.n());

    std::vector<LevelPlan> derived;
    if (plans.empty()) {
        ResourceModel rm = opts.resource.value_or(ResourceModel{});
        if (!opts.resource) {
            rm.scalar_size_bytes = sizeof(T);
        }
        derived = plan_schedule(schedule, level_stats(pattern, schedule), pattern.n(), rm);
        plans = derived;
    }
    if (plans.size() != schedule.level_count()) {
        throw DimensionError("got " + std::to_string(plans.size()) + " level plans for "
                             + std::to_string(schedule.level_count()) + " levels");
    }

    ParallelResult<T> result{LuFactors<T>{fp, scatter_values<T>(a, pattern)}, {}};
    FactorStats& stats = result.stats;
    T* v = result.factors.values.data();
    const double threshold = opts.zero_pivot_threshold;

    const std::size_t workers = std::max<std::size_t>(1, opts.worker_count);
    WorkerPool pool(workers);
    std::vector<std::vector<T>> workspaces;
    if (opts.deterministic) {
        workspaces.assign(workers, std::vector<T>(pattern.n(), T{0}));
    }

    std::atomic<std::uint64_t> flops{0};
    std::atomic<Index> active{0};
    std::atomic<Index> peak{0};
    std::mutex race_mutex;
    std::vector<Hazard> races;

    auto enter = [&] {
        const Index now = active.fetch_add(1) + 1;
        Index seen = peak.load();
        while (now > seen && !peak.compare_exchange_weak(seen, now)) {
        }
    };
    auto check_races = [&](Index level, Index j) {
        if (!opts.detect_races) {
            return;
        }
        std::vector<Hazard> found;
        scan_conflicts(pattern, schedule, level, j, found);
        if (!found.empty()) {
            std::lock_guard lock(race_mutex);
            races.insert(races.end(), found.begin(), found.end());
        }
    };

    stats.level_seconds.reserve(schedule.level_count());
    stats.level_modes.reserve(schedule.level_count());
    for (std::size_t l = 0; l < schedule.level_count(); ++l) {
        const auto level = static_cast<Index>(l);
        const auto& columns = schedule.levels[l];
        const LevelPlan& plan = plans[l];
        const std::size_t slots = std::max<Index>(1, plan.column_slots);
        const auto start = std::chrono::steady_clock::now();

        if (opts.deterministic) {
            // Each column applies its incoming updates itself, sources in
            // ascending order, so every element sees the sequential order.
            pool.run(columns.size(), slots, [&](std::size_t t, std::size_t w) {
                const Index k = columns[t];
                enter();
                check_races(level, k);
                flops += pull_column(pattern, v, k, workspaces[w], threshold);
                active.fetch_sub(1);
            });
        } else if (plan.mode != KernelMode::Stream) {
            // One task per column: scale it, then push into each subcolumn.
            pool.run(columns.size(), slots, [&](std::size_t t, std::size_t) {
                const Index j = columns[t];
                enter();
                check_races(level, j);
                std::uint64_t f = scale_column<AtomicAccess>(pattern, v, j, threshold);
                const auto subcolumns = pattern.subcolumns(j);
                for (std::size_t p = 0; p < subcolumns.size(); ++p) {
                    f += push_update<AtomicAccess>(pattern, v, j, pattern.subcolumn_slot(j, p), subcolumns[p]);
                }
                flops += f;
                active.fetch_sub(1);
            });
        } else {
            // Columns go through `slots` pipelines; each subcolumn update is
            // its own task.
            std::vector<std::pair<Index, std::size_t>> items;
            for (std::size_t first = 0; first < columns.size(); first += slots) {
                const std::size_t batch = std::min(slots, columns.size() - first);
                active.fetch_add(static_cast<Index>(batch));
                Index now = active.load();
                Index seen = peak.load();
                while (now > seen && !peak.compare_exchange_weak(seen, now)) {
                }
                pool.run(batch, workers, [&](std::size_t t, std::size_t) {
                    const Index j = columns[first + t];
                    check_races(level, j);
                    flops += scale_column<AtomicAccess>(pattern, v, j, threshold);
                });
                items.clear();
                for (std::size_t t = 0; t < batch; ++t) {
                    const Index j = columns[first + t];
                    for (std::size_t p = 0; p < pattern.subcolumns(j).size(); ++p) {
                        items.emplace_back(j, p);
                    }
                }
                pool.run(items.size(), workers, [&](std::size_t t, std::size_t) {
                    const auto [j, p] = items[t];
                    flops += push_update<AtomicAccess>(pattern, v, j, pattern.subcolumn_slot(j, p),
                                                       pattern.subcolumns(j)[p]);
                });
                active.fetch_sub(static_cast<Index>(batch));
            }
        }

        stats.level_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        stats.level_modes.push_back(plan.mode);
        if (!races.empty()) {
            std::sort(races.begin(), races.end(), [](const Hazard& x, const Hazard& y) {
                return std::tie(x.writer, x.reader, x.row, x.col) < std::tie(y.writer, y.reader, y.row, y.col);
            });
            throw ScheduleHazardError(std::move(races));
        }
    }
    stats.flops = flops.load();
    stats.peak_concurrent_columns = peak.load();
    return result;
}

template <class T>
std::vector<T> lower_solve(const LuFactors<T>& lu, std::span<const T> b)
{
    const FilledPattern& fp = *lu.pattern;
    if (static_cast<Index>(b.size()) != fp.n()) {
        throw DimensionError("right-hand side has length " + std::to_string(b.size()) + ", expected "
                             + std::to_string(fp.n()));
    }
    std::vector<T> y(b.begin(), b.end());
    const Index* rows = fp.full.row_idx().data();
    for (Index j = 0; j < fp.n(); ++j) {
        const T yj = y[j];
        for (Offset q = fp.l_begin(j); q < fp.l_end(j); ++q) {
            y[rows[q]] -= lu.values[q] * yj;
        }
    }
    return y;
}

template <class T>
std::vector<T> upper_solve(const LuFactors<T>& lu, std::span<const T> y)
{
    const FilledPattern& fp = *lu.pattern;
    if (static_cast<Index>(y.size()) != fp.n()) {
        throw DimensionError("right-hand side has length " + std::to_string(y.size()) + ", expected "
                             + std::to_string(fp.n()));
    }
    std::vector<T> x(y.begin(), y.end());
    const Index* rows = fp.full.row_idx().data();
    for (Index j = fp.n() - 1; j >= 0; --j) {
        const T d = lu.values[fp.diag_pos[j]];
        if (d == T{0}) {
            throw PivotError(j, 0.0, 0.0);
        }
        x[j] /= d;
        const T xj = x[j];
        for (Offset q = fp.full.col_ptr()[j]; q < fp.diag_pos[j]; ++q) {
            x[rows[q]] -= lu.values[q] * xj;
        }
    }
    return x;
}

template <class T>
double residual(const CscMatrix& a, const LuFactors<T>& lu)
{
    const FilledPattern& fp = *lu.pattern;
    if (a.n() != fp.n()) {
        throw DimensionError("matrix and factor orders differ");
    }
    const auto& cp = fp.full.col_ptr();
    const Index* rows = fp.full.row_idx().data();
    std::vector<double> acc(fp.n(), 0.0);
    double diff2 = 0.0;
    double norm2 = 0.0;
    for (Index k = 0; k < fp.n(); ++k) {
        // column k of L*U: sum over U(j, k) of L(:, j) * U(j, k)
        for (Offset p = cp[k]; p <= fp.diag_pos[k]; ++p) {
            const Index j = rows[p];
            const double u = static_cast<double>(lu.values[p]);
            acc[j] += u;
            for (Offset q = fp.l_begin(j); q < fp.l_end(j); ++q) {
                acc[rows[q]] += static_cast<double>(lu.values[q]) * u;
            }
        }
        for (Offset p = a.pattern.col_ptr()[k]; p < a.pattern.col_ptr()[k + 1]; ++p) {
            acc[a.pattern.row_idx()[p]] -= a.values[p];
            norm2 += a.values[p] * a.values[p];
        }
        for (Offset p = cp[k]; p < cp[k + 1]; ++p) {
            diff2 += acc[rows[p]] * acc[rows[p]];
            acc[rows[p]] = 0.0;
        }
    }
    return norm2 > 0.0 ? std::sqrt(diff2 / norm2) : std::sqrt(diff2);
}

std::vector<double> multiply(const CscMatrix& a, std::span<const double> x)
{
    if (static_cast<Index>(x.size()) != a.n()) {
        throw DimensionError("vector length does not match matrix order");
    }
    std::vector<double> y(a.n(), 0.0);
    for (Index j = 0; j < a.n(); ++j) {
        for (Offset p = a.pattern.col_ptr()[j]; p < a.pattern.col_ptr()[j + 1]; ++p) {
            y[a.pattern.row_idx()[p]] += a.values[p] * x[j];
        }
    }
    return y;
}

template <class T>
std::uint64_t checksum(const LuFactors<T>& lu)
{
    std::uint64_t h = 14695981039346656037ull;
    const auto* bytes = reinterpret_cast<const unsigned char*>(lu.values.data());
    for (std::size_t i = 0; i < lu.values.size() * sizeof(T); ++i) {
        h ^= bytes[i];
        h *= 1099511628211ull;
    }
    return h;
}

#define LEVELU_INSTANTIATE(T)                                                                                   \
    template std::vector<T> scatter_values<T>(const CscMatrix&, const FilledPattern&);                         \
    template LuFactors<T> factor_left_looking<T>(const CscMatrix&, std::shared_ptr<const FilledPattern>,       \
                                                 const FactorOptions&);                                        \
    template LuFactors<T> factor_right_looking_seq<T>(const CscMatrix&, std::shared_ptr<const FilledPattern>,  \
                                                      const FactorOptions&);                                   \
    template void subcolumn_update<T>(const FilledPattern&, std::span<T>, Index, Index);                       \
    template ParallelResult<T> factor_parallel<T>(const CscMatrix&, std::shared_ptr<const FilledPattern>,      \
                                                  const LevelSchedule&, std::span<const LevelPlan>,            \
                                                  const FactorOptions&);                                       \
    template std::vector<T> lower_solve<T>(const LuFactors<T>&, std::span<const T>);                           \
    template std::vector<T> upper_solve<T>(const LuFactors<T>&, std::span<const T>);                           \
    template double residual<T>(const CscMatrix&, const LuFactors<T>&);                                        \
    template std::uint64_t checksum<T>(const LuFactors<T>&);

LEVELU_INSTANTIATE(float)
LEVELU_INSTANTIATE(double)

#undef LEVELU_INSTANTIATE

}  // namespace levelu
