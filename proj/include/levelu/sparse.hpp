#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace levelu {

using Index = std::int32_t;   // row / column index
using Offset = std::int64_t;  // position in a compressed index array

struct Entry {
    Index row = 0;
    Index col = 0;
    double value = 0.0;
};

/// Coordinate form used for ingestion. Duplicates are allowed here and
/// nowhere else.
struct Triplets {
    Index n_rows = 0;
    Index n_cols = 0;
    std::vector<Entry> entries;
};

/// Column-compressed structure of a square matrix. Row indices are
/// strictly increasing within each column.
class CscPattern {
public:
    CscPattern() = default;
    CscPattern(Index n, std::vector<Offset> col_ptr, std::vector<Index> row_idx);

    Index n() const { return n_; }
    Offset nnz() const { return col_ptr_.empty() ? 0 : col_ptr_.back(); }

    const std::vector<Offset>& col_ptr() const { return col_ptr_; }
    const std::vector<Index>& row_idx() const { return row_idx_; }

    std::span<const Index> column(Index j) const
    {
        return {row_idx_.data() + col_ptr_[j], static_cast<std::size_t>(col_ptr_[j + 1] - col_ptr_[j])};
    }

    /// Slot of (row, col) or nullopt when structurally absent.
    std::optional<Offset> find(Index row, Index col) const;
    bool contains(Index row, Index col) const { return find(row, col).has_value(); }

    /// Throws StructureError unless every CSC invariant holds.
    void validate() const;

    friend bool operator==(const CscPattern&, const CscPattern&) = default;

private:
    Index n_ = 0;
    std::vector<Offset> col_ptr_{0};
    std::vector<Index> row_idx_;
};

struct CscMatrix {
    CscPattern pattern;
    std::vector<double> values;

    Index n() const { return pattern.n(); }
    Offset nnz() const { return pattern.nnz(); }

    /// Value at (row, col); 0 when structurally absent.
    double at(Index row, Index col) const;

    friend bool operator==(const CscMatrix&, const CscMatrix&) = default;
};

/// Row-compressed view of a CscPattern. `slot[p]` is the CSC position of
/// the p-th CSR entry, so values stay in CSC order.
struct CsrView {
    Index n = 0;
    std::vector<Offset> row_ptr;
    std::vector<Index> col_idx;
    std::vector<Offset> slot;

    std::span<const Index> row(Index i) const
    {
        return {col_idx.data() + row_ptr[i], static_cast<std::size_t>(row_ptr[i + 1] - row_ptr[i])};
    }
};

/// A bijection on {0..n-1}. `inverse[new] = old`, `forward[old] = new`.
class Permutation {
public:
    Permutation() = default;

    static Permutation identity(Index n);
    /// Build from the new-to-old ordering `order[new] = old` (the form
    /// produced by AMD-style ordering tools).
    static Permutation from_order(std::vector<Index> order);

    Index size() const { return static_cast<Index>(forward_.size()); }
    const std::vector<Index>& forward() const { return forward_; }
    const std::vector<Index>& inverse() const { return inverse_; }

    Permutation inverted() const;

private:
    std::vector<Index> forward_;
    std::vector<Index> inverse_;
};

/// Sum duplicates and compress by column. Explicit zeros are kept.
CscMatrix to_csc(const Triplets& t);

/// Normalized coordinate form of `a`, column-major order.
Triplets extract_triplets(const CscMatrix& a);

/// result(i, j) = a(p_row.inverse[i], p_col.inverse[j])
CscMatrix permute(const CscMatrix& a, const Permutation& p_row, const Permutation& p_col);

CsrView make_csr_view(const CscPattern& p);

}  // namespace levelu
