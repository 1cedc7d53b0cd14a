#include "levelu/sparse.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "levelu/error.hpp"

namespace levelu {

CscPattern::CscPattern(Index n, std::vector<Offset> col_ptr, std::vector<Index> row_idx)
    : n_(n), col_ptr_(std::move(col_ptr)), row_idx_(std::move(row_idx))
{
    validate();
}

std::optional<Offset> CscPattern::find(Index row, Index col) const
{
    const auto rows = column(col);
    const auto it = std::lower_bound(rows.begin(), rows.end(), row);
    if (it == rows.end() || *it != row) {
        return std::nullopt;
    }
    return col_ptr_[col] + (it - rows.begin());
}

void CscPattern::validate() const
{
    if (n_ < 0) {
        throw StructureError("negative matrix order");
    }
    if (col_ptr_.size() != static_cast<std::size_t>(n_) + 1 || col_ptr_.front() != 0) {
        throw StructureError("col_ptr must have n+1 entries starting at 0");
    }
    if (col_ptr_.back() != static_cast<Offset>(row_idx_.size())) {
        throw StructureError("col_ptr[n] does not match the number of stored entries");
    }
    for (Index j = 0; j < n_; ++j) {
        if (col_ptr_[j + 1] < col_ptr_[j]) {
            throw StructureError("col_ptr decreases at column " + std::to_string(j));
        }
        for (Offset p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
            const Index i = row_idx_[p];
            if (i < 0 || i >= n_) {
                throw StructureError("row index out of range in column " + std::to_string(j));
            }
            if (p > col_ptr_[j] && row_idx_[p - 1] >= i) {
                throw StructureError("rows not strictly increasing in column " + std::to_string(j));
            }
        }
    }
}

double CscMatrix::at(Index row, Index col) const
{
    const auto slot = pattern.find(row, col);
    return slot ? values[*slot] : 0.0;
}

Permutation Permutation::identity(Index n)
{
    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    return from_order(std::move(order));
}

Permutation Permutation::from_order(std::vector<Index> order)
{
    const auto n = static_cast<Index>(order.size());
    Permutation p;
    p.forward_.assign(n, -1);
    for (Index k = 0; k < n; ++k) {
        const Index old = order[k];
        if (old < 0 || old >= n || p.forward_[old] != -1) {
            throw ParseError("not a permutation: index " + std::to_string(old) + " at position "
                             + std::to_string(k));
        }
        p.forward_[old] = k;
    }
    p.inverse_ = std::move(order);
    return p;
}

Permutation Permutation::inverted() const
{
    Permutation p;
    p.forward_ = inverse_;
    p.inverse_ = forward_;
    return p;
}

CscMatrix to_csc(const Triplets& t)
{
    if (t.n_rows != t.n_cols) {
        throw DimensionError("matrix must be square, got " + std::to_string(t.n_rows) + "x"
                             + std::to_string(t.n_cols));
    }
    const Index n = t.n_rows;
    for (const auto& e : t.entries) {
        if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n) {
            throw DimensionError("triplet (" + std::to_string(e.row) + ", " + std::to_string(e.col)
                                 + ") outside a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
        }
    }

    std::vector<Entry> sorted = t.entries;
    std::stable_sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });

    std::vector<Offset> col_ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<Index> row_idx;
    std::vector<double> values;
    row_idx.reserve(sorted.size());
    values.reserve(sorted.size());
    for (std::size_t p = 0; p < sorted.size(); ++p) {
        const auto& e = sorted[p];
        if (p > 0 && sorted[p - 1].row == e.row && sorted[p - 1].col == e.col) {
            values.back() += e.value;
            continue;
        }
        row_idx.push_back(e.row);
        values.push_back(e.value);
        ++col_ptr[e.col + 1];
    }
    std::partial_sum(col_ptr.begin(), col_ptr.end(), col_ptr.begin());
    return CscMatrix{CscPattern(n, std::move(col_ptr), std::move(row_idx)), std::move(values)};
}

Triplets extract_triplets(const CscMatrix& a)
{
    Triplets t{a.n(), a.n(), {}};
    t.entries.reserve(a.nnz());
    for (Index j = 0; j < a.n(); ++j) {
        for (Offset p = a.pattern.col_ptr()[j]; p < a.pattern.col_ptr()[j + 1]; ++p) {
            t.entries.push_back({a.pattern.row_idx()[p], j, a.values[p]});
        }
    }
    return t;
}

CscMatrix permute(const CscMatrix& a, const Permutation& p_row, const Permutation& p_col)
{
    if (p_row.size() != a.n() || p_col.size() != a.n()) {
        throw DimensionError("permutation size does not match matrix order " + std::to_string(a.n()));
    }
    Triplets t{a.n(), a.n(), {}};
    t.entries.reserve(a.nnz());
    for (Index j = 0; j < a.n(); ++j) {
        for (Offset p = a.pattern.col_ptr()[j]; p < a.pattern.col_ptr()[j + 1]; ++p) {
            t.entries.push_back({p_row.forward()[a.pattern.row_idx()[p]], p_col.forward()[j], a.values[p]});
        }
    }
    return to_csc(t);
}

CsrView make_csr_view(const CscPattern& p)
{
    CsrView v;
    v.n = p.n();
    v.row_ptr.assign(static_cast<std::size_t>(p.n()) + 1, 0);
    for (const Index i : p.row_idx()) {
        ++v.row_ptr[i + 1];
    }
    std::partial_sum(v.row_ptr.begin(), v.row_ptr.end(), v.row_ptr.begin());

    v.col_idx.resize(p.nnz());
    v.slot.resize(p.nnz());
    std::vector<Offset> next(v.row_ptr.begin(), v.row_ptr.end() - 1);
    // Columns visited in ascending order, so each row comes out sorted.
    for (Index j = 0; j < p.n(); ++j) {
        for (Offset s = p.col_ptr()[j]; s < p.col_ptr()[j + 1]; ++s) {
            const Offset q = next[p.row_idx()[s]]++;
            v.col_idx[q] = j;
            v.slot[q] = s;
        }
    }
    return v;
}

}  // namespace levelu
