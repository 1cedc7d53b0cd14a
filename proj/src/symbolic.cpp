#include "levelu/symbolic.hpp"

#include <algorithm>
#include <string>

#include "levelu/error.hpp"

namespace levelu {

FilledPattern symbolic_fillin(const CscPattern& a, const SymbolicOptions& opts)
{
    const Index n = a.n();
    FilledPattern fp;
    fp.source_nnz = a.nnz();

    std::vector<Offset> col_ptr(static_cast<std::size_t>(n) + 1, 0);
    std::vector<Index> row_idx;
    row_idx.reserve(static_cast<std::size_t>(a.nnz()) + n);
    fp.diag_pos.resize(n);

    // mark[r] == j  <=>  row r already reached while building column j
    std::vector<Index> mark(n, -1);
    std::vector<Index> reached;
    std::vector<Index> stack;

    for (Index j = 0; j < n; ++j) {
        const auto seeds = a.column(j);
        if (seeds.empty()) {
            throw StructureError("column " + std::to_string(j) + " has no entries (structurally singular)");
        }
        if (!std::binary_search(seeds.begin(), seeds.end(), j)) {
            if (!opts.inject_missing_diagonal) {
                throw StructureError("missing structural diagonal at column " + std::to_string(j));
            }
            fp.injected_diagonals.push_back(j);
        }

        reached.clear();
        mark[j] = j;
        reached.push_back(j);
        for (const Index seed : seeds) {
            if (mark[seed] == j) {
                continue;
            }
            mark[seed] = j;
            reached.push_back(seed);
            stack.push_back(seed);
            while (!stack.empty()) {
                const Index r = stack.back();
                stack.pop_back();
                if (r >= j) {
                    continue;  // column r of L not computed yet
                }
                for (Offset p = fp.diag_pos[r] + 1; p < col_ptr[r + 1]; ++p) {
                    const Index i = row_idx[p];
                    if (mark[i] != j) {
                        mark[i] = j;
                        reached.push_back(i);
                        stack.push_back(i);
                    }
                }
            }
        }

        std::sort(reached.begin(), reached.end());
        const Offset start = static_cast<Offset>(row_idx.size());
        row_idx.insert(row_idx.end(), reached.begin(), reached.end());
        col_ptr[j + 1] = static_cast<Offset>(row_idx.size());
        fp.diag_pos[j] = start + (std::lower_bound(reached.begin(), reached.end(), j) - reached.begin());
    }

    fp.full = CscPattern(n, std::move(col_ptr), std::move(row_idx));
    fp.csr = make_csr_view(fp.full);
    fp.row_diag_pos.resize(n);
    for (Index k = 0; k < n; ++k) {
        const auto row = fp.csr.row(k);
        fp.row_diag_pos[k] = fp.csr.row_ptr[k] + (std::lower_bound(row.begin(), row.end(), k) - row.begin());
    }
    return fp;
}

FillCount count_fill(const FilledPattern& fp)
{
    return {fp.source_nnz, fp.nnz()};
}

}  // namespace levelu
