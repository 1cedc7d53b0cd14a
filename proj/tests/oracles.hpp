#pragma once

// Dense reference computations used to check the sparse code. Nothing here
// calls into the library except for reading its data structures.

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "levelu/depgraph.hpp"
#include "levelu/sparse.hpp"
#include "levelu/symbolic.hpp"

namespace oracle {

using levelu::Index;

using Dense = std::vector<std::vector<double>>;
using Mask = std::vector<std::vector<bool>>;
using Edges = std::set<std::pair<Index, Index>>;  // (dependent, dependency)

inline Dense to_dense(const levelu::CscMatrix& a)
{
    Dense d(a.n(), std::vector<double>(a.n(), 0.0));
    for (Index j = 0; j < a.n(); ++j) {
        for (auto p = a.pattern.col_ptr()[j]; p < a.pattern.col_ptr()[j + 1]; ++p) {
            d[a.pattern.row_idx()[p]][j] = a.values[p];
        }
    }
    return d;
}

inline Mask to_mask(const levelu::CscPattern& p)
{
    Mask m(p.n(), std::vector<bool>(p.n(), false));
    for (Index j = 0; j < p.n(); ++j) {
        for (const Index i : p.column(j)) {
            m[i][j] = true;
        }
    }
    return m;
}

/// Structural Gaussian elimination without pivoting: every entry is treated
/// as algebraically nonzero.
inline Mask dense_symbolic(Mask m)
{
    const auto n = m.size();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = k + 1; i < n; ++i) {
            if (!m[i][k]) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                if (m[k][j]) {
                    m[i][j] = true;
                }
            }
        }
    }
    return m;
}

/// Doolittle LU in place (unit L below the diagonal, U on and above).
inline Dense dense_lu(Dense a)
{
    const auto n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = k + 1; i < n; ++i) {
            a[i][k] /= a[k][k];
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] -= a[i][k] * a[k][j];
            }
        }
    }
    return a;
}

inline Edges edges_of(const levelu::DependencyGraph& g)
{
    Edges e;
    for (Index j = 0; j < g.n(); ++j) {
        for (const Index i : g.deps(j)) {
            e.emplace(j, i);
        }
    }
    return e;
}

/// Elements column j writes during its submatrix update, from the mask of A_s.
inline std::vector<std::pair<Index, Index>> write_set(const Mask& s, Index j)
{
    std::vector<std::pair<Index, Index>> w;
    const auto n = static_cast<Index>(s.size());
    for (Index i = j + 1; i < n; ++i) {
        for (Index k = j + 1; k < n; ++k) {
            if (s[i][j] && s[j][k]) {
                w.emplace_back(i, k);
            }
        }
    }
    return w;
}

/// Elements column t reads: its row right of the diagonal, its pivot and
/// its L column.
inline bool reads(const Mask& s, Index t, Index r, Index c)
{
    return (r == t && c >= t && s[r][c]) || (c == t && r > t && s[r][c]);
}

/// Upward rule straight from the mask.
inline Edges upward_edges(const Mask& s)
{
    Edges e;
    const auto n = static_cast<Index>(s.size());
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < j; ++i) {
            bool l_nonempty = false;
            for (Index r = i + 1; r < n; ++r) {
                l_nonempty = l_nonempty || s[r][i];
            }
            if (s[i][j] && l_nonempty) {
                e.emplace(j, i);
            }
        }
    }
    return e;
}

/// Upward edges plus an edge for every pair of columns where one writes an
/// element the other reads, in either order.
inline Edges hazard_edges(const Mask& s)
{
    Edges e = upward_edges(s);
    const auto n = static_cast<Index>(s.size());
    for (Index a = 0; a < n; ++a) {
        for (const auto& [r, c] : write_set(s, a)) {
            for (Index b = 0; b < n; ++b) {
                if (b != a && reads(s, b, r, c)) {
                    e.emplace(std::max(a, b), std::min(a, b));
                }
            }
        }
    }
    return e;
}

/// All (writer, reader, row, col, level) hazards by exhaustive pairwise
/// intersection within each level.
inline std::vector<levelu::Hazard> hazards(const Mask& s, const levelu::LevelSchedule& sched)
{
    std::vector<levelu::Hazard> out;
    for (std::size_t l = 0; l < sched.levels.size(); ++l) {
        for (const Index a : sched.levels[l]) {
            for (const auto& [r, c] : write_set(s, a)) {
                for (const Index b : sched.levels[l]) {
                    if (b != a && reads(s, b, r, c)) {
                        out.push_back({a, b, r, c, static_cast<Index>(l)});
                    }
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const levelu::Hazard& x, const levelu::Hazard& y) {
        return std::tie(x.level, x.writer, x.reader, x.row, x.col) < std::tie(y.level, y.writer, y.reader, y.row, y.col);
    });
    return out;
}

inline double frobenius(const Dense& a)
{
    double s = 0.0;
    for (const auto& row : a) {
        for (const double v : row) {
            s += v * v;
        }
    }
    return std::sqrt(s);
}

/// Random triplets with duplicates and explicit zeros.
inline levelu::Triplets random_triplets(Index n, std::size_t count, std::mt19937_64& rng)
{
    std::uniform_int_distribution<Index> idx(0, n - 1);
    std::uniform_int_distribution<int> val(-4, 4);
    levelu::Triplets t{n, n, {}};
    for (std::size_t e = 0; e < count; ++e) {
        t.entries.push_back({idx(rng), idx(rng), static_cast<double>(val(rng))});
    }
    return t;
}

}  // namespace oracle
