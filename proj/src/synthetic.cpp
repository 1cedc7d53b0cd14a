#include "levelu/synthetic.hpp"

#include <cmath>
#include <random>

namespace levelu::synthetic {

namespace {

// Sets every diagonal entry to 1 + max(row sum, column sum) of the
// off-diagonal magnitudes.
CscMatrix dominate(Triplets t)
{
    const Index n = t.n_rows;
    std::vector<double> row_sum(n, 0.0), col_sum(n, 0.0);
    for (const auto& e : t.entries) {
        if (e.row != e.col) {
            row_sum[e.row] += std::abs(e.value);
            col_sum[e.col] += std::abs(e.value);
        }
    }
    for (Index i = 0; i < n; ++i) {
        t.entries.push_back({i, i, 1.0 + std::max(row_sum[i], col_sum[i])});
    }
    return to_csc(t);
}

}  // namespace

CscPattern random_pattern(Index n, double density, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution keep(density);
    Triplets t{n, n, {}};
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (i == j || keep(rng)) {
                t.entries.push_back({i, j, 1.0});
            }
        }
    }
    return to_csc(t).pattern;
}

CscMatrix random_diag_dominant(Index n, double density, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution keep(density);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    Triplets t{n, n, {}};
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            if (i != j && keep(rng)) {
                t.entries.push_back({i, j, value(rng)});
            }
        }
    }
    return dominate(std::move(t));
}

CscMatrix diagonal(Index n)
{
    Triplets t{n, n, {}};
    for (Index i = 0; i < n; ++i) {
        t.entries.push_back({i, i, 1.0 + i});
    }
    return to_csc(t);
}

CscMatrix chain(Index n)
{
    Triplets t{n, n, {}};
    for (Index i = 0; i + 1 < n; ++i) {
        t.entries.push_back({i + 1, i, -1.0});
        t.entries.push_back({i, i + 1, -1.0});
    }
    return dominate(std::move(t));
}

CscMatrix banded(Index n, Index half_bandwidth)
{
    Triplets t{n, n, {}};
    for (Index j = 0; j < n; ++j) {
        for (Index i = std::max<Index>(0, j - half_bandwidth); i <= std::min<Index>(n - 1, j + half_bandwidth); ++i) {
            if (i != j) {
                t.entries.push_back({i, j, 1.0 / (1.0 + std::abs(i - j)) * ((i + j) % 2 ? 1.0 : -1.0)});
            }
        }
    }
    return dominate(std::move(t));
}

CscMatrix block_arrow(Index blocks, Index block_size, Index border)
{
    const Index interior = blocks * block_size;
    const Index n = interior + border;
    Triplets t{n, n, {}};
    auto coupling = [](Index i, Index j) { return 0.5 / (1.0 + ((3 * i + 7 * j) % 11)); };
    for (Index b = 0; b < blocks; ++b) {
        const Index first = b * block_size;
        for (Index j = first; j < first + block_size; ++j) {
            for (Index i = first; i < first + block_size; ++i) {
                if (i != j) {
                    t.entries.push_back({i, j, coupling(i, j)});
                }
            }
        }
    }
    for (Index r = interior; r < n; ++r) {
        for (Index j = 0; j < n; ++j) {
            if (r != j) {
                t.entries.push_back({r, j, -coupling(r, j)});
                if (j < interior) {
                    t.entries.push_back({j, r, coupling(j, r)});
                }
            }
        }
    }
    return dominate(std::move(t));
}

CscMatrix double_u_example()
{
    Triplets t{8, 8, {}};
    const double diag[8] = {4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0};
    for (Index i = 0; i < 8; ++i) {
        t.entries.push_back({i, i, diag[i]});
    }
    t.entries.push_back({1, 0, 1.0});
    t.entries.push_back({0, 4, 2.0});
    t.entries.push_back({1, 4, 1.5});
    t.entries.push_back({2, 4, -1.0});
    t.entries.push_back({2, 7, 3.0});
    t.entries.push_back({3, 6, 2.0});
    t.entries.push_back({5, 3, 1.0});
    t.entries.push_back({5, 6, -2.0});
    t.entries.push_back({6, 7, 1.0});
    t.entries.push_back({7, 3, 3.0});
    t.entries.push_back({7, 5, -1.5});
    t.entries.push_back({7, 6, 2.5});
    return to_csc(t);
}

}  // namespace levelu::synthetic
