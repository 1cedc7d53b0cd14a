#pragma once

#include <span>
#include <vector>

#include "levelu/sparse.hpp"

namespace levelu {

/// Structure of L+U after fill-in. Column j of `full` is split at
/// `diag_pos[j]` into its U part (rows < j) and its L part (rows > j);
/// row k of `csr` is split at `row_diag_pos[k]` the same way.
struct FilledPattern {
    CscPattern full;
    std::vector<Offset> diag_pos;
    CsrView csr;
    std::vector<Offset> row_diag_pos;

    Offset source_nnz = 0;
    /// Columns whose diagonal was missing from the input and added as an
    /// explicit zero.
    std::vector<Index> injected_diagonals;

    Index n() const { return full.n(); }
    Offset nnz() const { return full.nnz(); }

    /// Rows i < j with A_s(i, j) != 0, ascending.
    std::span<const Index> u_rows(Index j) const
    {
        const auto* base = full.row_idx().data();
        return {base + full.col_ptr()[j], static_cast<std::size_t>(diag_pos[j] - full.col_ptr()[j])};
    }
    /// Rows i > j with A_s(i, j) != 0, ascending.
    std::span<const Index> l_rows(Index j) const
    {
        const auto* base = full.row_idx().data();
        return {base + diag_pos[j] + 1, static_cast<std::size_t>(full.col_ptr()[j + 1] - diag_pos[j] - 1)};
    }
    Offset l_begin(Index j) const { return diag_pos[j] + 1; }
    Offset l_end(Index j) const { return full.col_ptr()[j + 1]; }

    /// Columns k > j with A_s(j, k) != 0 (the subcolumns of j), ascending.
    std::span<const Index> subcolumns(Index j) const
    {
        const auto* base = csr.col_idx.data();
        return {base + row_diag_pos[j] + 1, static_cast<std::size_t>(csr.row_ptr[j + 1] - row_diag_pos[j] - 1)};
    }
    /// Columns i < k with A_s(k, i) != 0 (left of the diagonal in row k).
    std::span<const Index> row_left(Index k) const
    {
        const auto* base = csr.col_idx.data();
        return {base + csr.row_ptr[k], static_cast<std::size_t>(row_diag_pos[k] - csr.row_ptr[k])};
    }
    /// CSC slot of the p-th subcolumn entry of row j.
    Offset subcolumn_slot(Index j, std::size_t p) const { return csr.slot[row_diag_pos[j] + 1 + p]; }
};

struct SymbolicOptions {
    /// Add an explicit zero diagonal entry where the input lacks one.
    /// When false, a missing diagonal is a StructureError.
    bool inject_missing_diagonal = true;
};

/// Gilbert-Peierls fill-in: the pattern of column j is everything reachable
/// from the nonzeros of A(:, j) through the L columns already computed.
/// Never prunes; analysis is purely structural.
FilledPattern symbolic_fillin(const CscPattern& a, const SymbolicOptions& opts = {});

struct FillCount {
    Offset nz_before = 0;
    Offset nnz_after = 0;
};

FillCount count_fill(const FilledPattern& fp);

}  // namespace levelu
