#include "levelu/depgraph.hpp"

#include <algorithm>
#include <string>
#include <tuple>

namespace levelu {

namespace {

// Merges two ascending lists into `out`, dropping duplicates.
void merge_unique(std::span<const Index> a, std::span<const Index> b, std::vector<Index>& out)
{
    std::size_t p = 0, q = 0;
    while (p < a.size() || q < b.size()) {
        Index next = 0;
        if (q == b.size() || (p < a.size() && a[p] < b[q])) {
            next = a[p++];
        } else if (p == a.size() || b[q] < a[p]) {
            next = b[q++];
        } else {
            next = a[p++];
            ++q;
        }
        out.push_back(next);
    }
}

// True when the ascending lists share an element greater than `floor`.
// A plain merge over both whole rows, as the published loop describes.
bool share_above(std::span<const Index> a, std::span<const Index> b, Index floor)
{
    auto p = a.begin();
    auto q = b.begin();
    while (p != a.end() && q != b.end()) {
        if (*p < *q) {
            ++p;
        } else if (*q < *p) {
            ++q;
        } else if (*p > floor) {
            return true;
        } else {
            ++p;
            ++q;
        }
    }
    return false;
}

bool has_l(const FilledPattern& fp, Index i)
{
    return fp.l_end(i) > fp.l_begin(i);
}

}  // namespace

std::string_view to_string(DependencyMethod m)
{
    switch (m) {
    case DependencyMethod::Upward: return "upward";
    case DependencyMethod::DoubleUExact: return "exact";
    case DependencyMethod::Relaxed: return "relaxed";
    }
    return "?";
}

std::optional<DependencyMethod> parse_dependency_method(std::string_view s)
{
    if (s == "upward") return DependencyMethod::Upward;
    if (s == "exact") return DependencyMethod::DoubleUExact;
    if (s == "relaxed") return DependencyMethod::Relaxed;
    return std::nullopt;
}

DependencyGraph::DependencyGraph(DependencyMethod method, std::vector<Offset> ptr, std::vector<Index> deps)
    : method_(method), ptr_(std::move(ptr)), deps_(std::move(deps))
{
    if (ptr_.empty()) {
        ptr_.push_back(0);
    }
}

bool DependencyGraph::depends(Index j, Index i) const
{
    const auto d = deps(j);
    return std::binary_search(d.begin(), d.end(), i);
}

ScheduleHazardError::ScheduleHazardError(std::vector<Hazard> hazards)
    : Error([&] {
          const auto& h = hazards.front();
          return "read-write hazard in level " + std::to_string(h.level) + ": column " + std::to_string(h.writer)
                 + " writes (" + std::to_string(h.row) + ", " + std::to_string(h.col) + ") read by column "
                 + std::to_string(h.reader) + " (" + std::to_string(hazards.size()) + " total)";
      }()),
      hazards_(std::move(hazards))
{
}

DependencyGraph detect_upward(const FilledPattern& fp)
{
    const Index n = fp.n();
    std::vector<Offset> ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<Index> deps;
    for (Index k = 0; k < n; ++k) {
        for (const Index i : fp.u_rows(k)) {
            if (has_l(fp, i)) {
                deps.push_back(i);
            }
        }
        ptr[k + 1] = static_cast<Offset>(deps.size());
    }
    return {DependencyMethod::Upward, std::move(ptr), std::move(deps)};
}

DependencyGraph detect_double_u_exact(const FilledPattern& fp)
{
    const Index n = fp.n();
    std::vector<std::vector<Index>> found(n);

    // The published triple loop, kept literal: every j that reveals the
    // conflict appends i again, and duplicates are removed afterwards. Only
    // the row index sets come from the CSR view instead of being rebuilt.
    for (Index i = 0; i < n; ++i) {
        const auto row_i = fp.csr.row(i);
        // t = i would only produce a self edge
        for (const Index t : fp.l_rows(i)) {
            const auto col_t = fp.full.column(t);
            for (auto it = col_t.begin() + (fp.diag_pos[t] - fp.full.col_ptr()[t]); it != col_t.end(); ++it) {
                if (share_above(row_i, fp.csr.row(*it), t)) {
                    found[t].push_back(i);
                }
            }
        }
    }
    for (auto& list : found) {
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    const DependencyGraph upward = detect_upward(fp);
    std::vector<Offset> ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<Index> deps;
    for (Index t = 0; t < n; ++t) {
        // `found[t]` is ascending because the outer loop runs over i in order.
        merge_unique(upward.deps(t), found[t], deps);
        ptr[t + 1] = static_cast<Offset>(deps.size());
    }
    return {DependencyMethod::DoubleUExact, std::move(ptr), std::move(deps)};
}

DependencyGraph detect_relaxed(const FilledPattern& fp)
{
    const Index n = fp.n();
    std::vector<Offset> ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<Index> deps;
    deps.reserve(static_cast<std::size_t>(fp.nnz()));
    std::vector<Index> up;
    for (Index k = 0; k < n; ++k) {
        up.clear();
        for (const Index i : fp.u_rows(k)) {
            if (has_l(fp, i)) {
                up.push_back(i);
            }
        }
        merge_unique(up, fp.row_left(k), deps);
        ptr[k + 1] = static_cast<Offset>(deps.size());
    }
    return {DependencyMethod::Relaxed, std::move(ptr), std::move(deps)};
}

DependencyGraph detect(const FilledPattern& fp, DependencyMethod method)
{
    switch (method) {
    case DependencyMethod::Upward: return detect_upward(fp);
    case DependencyMethod::DoubleUExact: return detect_double_u_exact(fp);
    case DependencyMethod::Relaxed: return detect_relaxed(fp);
    }
    throw InternalError("unknown dependency method");
}

LevelSchedule levelize(const DependencyGraph& g)
{
    const Index n = g.n();
    LevelSchedule s;
    s.level_of.assign(n, 0);
    Index depth = n > 0 ? 1 : 0;
    for (Index j = 0; j < n; ++j) {
        Index level = 0;
        for (const Index i : g.deps(j)) {
            level = std::max(level, s.level_of[i] + 1);
        }
        s.level_of[j] = level;
        depth = std::max(depth, level + 1);
    }
    s.levels.resize(depth);
    for (Index j = 0; j < n; ++j) {
        s.levels[s.level_of[j]].push_back(j);
    }
    return s;
}

void LevelSchedule::validate(Index n) const
{
    if (static_cast<Index>(level_of.size()) != n) {
        throw StructureError("schedule covers " + std::to_string(level_of.size()) + " columns, expected "
                             + std::to_string(n));
    }
    std::vector<char> seen(n, 0);
    for (std::size_t l = 0; l < levels.size(); ++l) {
        if (levels[l].empty()) {
            throw StructureError("level " + std::to_string(l) + " is empty");
        }
        for (const Index j : levels[l]) {
            if (j < 0 || j >= n || seen[j] || level_of[j] != static_cast<Index>(l)) {
                throw StructureError("schedule is not a partition of the columns (column " + std::to_string(j)
                                     + ")");
            }
            seen[j] = 1;
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw StructureError("schedule omits some columns");
    }
}

LevelSchedule LevelSchedule::sequential(Index n)
{
    LevelSchedule s;
    s.levels.resize(n);
    s.level_of.resize(n);
    for (Index j = 0; j < n; ++j) {
        s.levels[j] = {j};
        s.level_of[j] = j;
    }
    return s;
}

HazardReport simulate_hazards(const FilledPattern& fp, const LevelSchedule& s)
{
    s.validate(fp.n());
    HazardReport report;
    for (std::size_t l = 0; l < s.levels.size(); ++l) {
        const auto level = static_cast<Index>(l);
        for (const Index j : s.levels[l]) {
            const auto subcolumns = fp.subcolumns(j);
            for (const Index i : fp.l_rows(j)) {
                for (const Index k : subcolumns) {
                    // (i, k) belongs to row i when i < k, to column k otherwise.
                    const Index reader = std::min(i, k);
                    if (s.level_of[reader] == level) {
                        report.hazards.push_back({j, reader, i, k, level});
                    }
                }
            }
        }
    }
    std::sort(report.hazards.begin(), report.hazards.end(), [](const Hazard& a, const Hazard& b) {
        return std::tie(a.level, a.writer, a.reader, a.row, a.col) < std::tie(b.level, b.writer, b.reader, b.row, b.col);
    });
    return report;
}

LevelStats level_stats(const FilledPattern& fp, const LevelSchedule& s)
{
    s.validate(fp.n());
    LevelStats stats;
    stats.levels.reserve(s.levels.size());
    for (const auto& level : s.levels) {
        LevelInfo info;
        info.size = static_cast<Index>(level.size());
        for (const Index j : level) {
            info.max_subcolumns = std::max(info.max_subcolumns, static_cast<Index>(fp.subcolumns(j).size()));
        }
        stats.levels.push_back(info);
    }
    return stats;
}

}  // namespace levelu
