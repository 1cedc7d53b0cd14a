#include <doctest.h>

#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "levelu/matrix_market.hpp"
#include "levelu/sparse.hpp"
#include "oracles.hpp"

using namespace levelu;

TEST_SUITE_BEGIN("sparse");

TEST_CASE("matrix market general header maps fields directly")
{
    std::istringstream in("%%MatrixMarket matrix coordinate real general\n"
                          "% a comment\n"
                          "2 2 2\n"
                          "1 1 4.0\n"
                          "2 2 3.0\n");
    const Triplets t = load_matrix_market(in);
    CHECK(t.n_rows == 2);
    CHECK(t.n_cols == 2);
    REQUIRE(t.entries.size() == 2);
    CHECK(t.entries[0].row == 0);
    CHECK(t.entries[0].col == 0);
    CHECK(t.entries[0].value == 4.0);
    CHECK(t.entries[1].row == 1);
    CHECK(t.entries[1].value == 3.0);
}

TEST_CASE("matrix market symmetric input is expanded")
{
    std::istringstream in("%%MatrixMarket matrix coordinate integer symmetric\n"
                          "2 2 3\n"
                          "1 1 1\n"
                          "2 1 5\n"
                          "2 2 2\n");
    const CscMatrix a = to_csc(load_matrix_market(in));
    CHECK(a.nnz() == 4);
    CHECK(a.at(1, 0) == 5.0);
    CHECK(a.at(0, 1) == 5.0);
    CHECK(a.at(0, 0) == 1.0);
}

TEST_CASE("matrix market rejects unsupported or broken input")
{
    const char* bad[] = {
        "",
        "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n1 1\n",
        "%%MatrixMarket matrix coordinate complex general\n2 2 1\n1 1 1 0\n",
        "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n",
        "%%MatrixMarket matrix coordinate real hermitian\n2 2 1\n1 1 1\n",
        "%%MatrixMarket matrix coordinate real general\n2 3 1\n1 1 1\n",
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n",
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1\n",
        "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n",
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 x\n",
        "not a header\n",
    };
    for (const char* text : bad) {
        std::istringstream in(text);
        CHECK_THROWS_AS(load_matrix_market(in), ParseError);
    }
}

TEST_CASE("matrix market write then read returns the same matrix")
{
    std::mt19937_64 rng(7);
    const CscMatrix a = to_csc(oracle::random_triplets(12, 40, rng));
    std::stringstream buf;
    write_matrix_market(buf, a);
    CHECK(to_csc(load_matrix_market(buf)) == a);
}

TEST_CASE("to_csc compresses by column")
{
    const CscMatrix a = to_csc({2, 2, {{0, 0, 1.0}, {1, 1, 1.0}}});
    CHECK(a.pattern.col_ptr() == std::vector<Offset>{0, 1, 2});
}

TEST_CASE("to_csc sums duplicates")
{
    const CscMatrix a = to_csc({1, 1, {{0, 0, 1.0}, {0, 0, 2.0}}});
    CHECK(a.nnz() == 1);
    CHECK(a.values[0] == 3.0);
}

TEST_CASE("to_csc rejects non-square and out-of-range input")
{
    CHECK_THROWS_AS(to_csc({2, 3, {}}), DimensionError);
    CHECK_THROWS_AS(to_csc({2, 2, {{2, 0, 1.0}}}), DimensionError);
}

TEST_CASE("to_csc agrees with dense accumulation on random triplets")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 50;
        const Triplets t = oracle::random_triplets(n, 300, rng);
        std::map<std::pair<Index, Index>, double> acc;
        for (const auto& e : t.entries) {
            acc[{e.col, e.row}] += e.value;
        }
        const CscMatrix a = to_csc(t);
        a.pattern.validate();
        REQUIRE(a.nnz() == static_cast<Offset>(acc.size()));
        // extract_triplets walks column-major, the same order as the map keys
        const Triplets back = extract_triplets(a);
        auto it = acc.begin();
        for (const auto& e : back.entries) {
            CHECK(e.col == it->first.first);
            CHECK(e.row == it->first.second);
            CHECK(e.value == it->second);
            ++it;
        }
        CHECK(to_csc(back) == a);
    }
}

TEST_CASE("explicit zeros stay structural")
{
    const CscMatrix a = to_csc({2, 2, {{0, 0, 1.0}, {1, 0, 0.0}, {1, 1, 1.0}}});
    CHECK(a.pattern.contains(1, 0));
    CHECK(a.nnz() == 3);
}

TEST_CASE("permutation from order builds both directions")
{
    const Permutation p = Permutation::from_order({2, 0, 1});
    CHECK(p.inverse() == std::vector<Index>{2, 0, 1});
    CHECK(p.forward() == std::vector<Index>{1, 2, 0});
    CHECK(p.inverted().inverse() == p.forward());
    CHECK_THROWS_AS(Permutation::from_order({0, 0, 1}), ParseError);
    CHECK_THROWS_AS(Permutation::from_order({0, 3, 1}), ParseError);
}

TEST_CASE("permute with identity keeps the matrix")
{
    std::mt19937_64 rng(3);
    const CscMatrix a = to_csc(oracle::random_triplets(10, 30, rng));
    const auto id = Permutation::identity(10);
    CHECK(permute(a, id, id) == a);
}

TEST_CASE("permute swapping two rows exchanges them")
{
    const CscMatrix a = to_csc({2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 1, 3.0}}});
    const auto swap = Permutation::from_order({1, 0});
    const CscMatrix b = permute(a, swap, Permutation::identity(2));
    CHECK(b.at(1, 0) == 1.0);
    CHECK(b.at(1, 1) == 2.0);
    CHECK(b.at(0, 1) == 3.0);
    CHECK(b.at(0, 0) == 0.0);
}

TEST_CASE("permute matches a dense permuted oracle")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 30;
        const CscMatrix a = to_csc(oracle::random_triplets(n, 150, rng));
        std::vector<Index> ro(n), co(n);
        std::iota(ro.begin(), ro.end(), 0);
        std::iota(co.begin(), co.end(), 0);
        std::shuffle(ro.begin(), ro.end(), rng);
        std::shuffle(co.begin(), co.end(), rng);
        const auto pr = Permutation::from_order(ro);
        const auto pc = Permutation::from_order(co);
        const CscMatrix b = permute(a, pr, pc);
        b.pattern.validate();
        const auto da = oracle::to_dense(a);
        const auto db = oracle::to_dense(b);
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                CHECK(db[i][j] == da[ro[i]][co[j]]);
            }
        }
        CHECK(permute(b, pr.inverted(), pc.inverted()) == a);
    }
}

TEST_CASE("permute rejects size mismatch")
{
    const CscMatrix a = to_csc({2, 2, {{0, 0, 1.0}}});
    CHECK_THROWS_AS(permute(a, Permutation::identity(3), Permutation::identity(2)), DimensionError);
}

TEST_CASE("csr view of small patterns")
{
    const CsrView d = make_csr_view(to_csc({3, 3, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}}}).pattern);
    CHECK(d.row_ptr == std::vector<Offset>{0, 1, 2, 3});

    const CsrView c = make_csr_view(to_csc({3, 3, {{0, 1, 1}, {1, 1, 1}, {2, 1, 1}}}).pattern);
    for (Index i = 0; i < 3; ++i) {
        REQUIRE(c.row(i).size() == 1);
        CHECK(c.row(i)[0] == 1);
    }
}

TEST_CASE("csr view equals a brute-force transpose")
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 40;
        const CscMatrix a = to_csc(oracle::random_triplets(n, 200, rng));
        const CsrView v = make_csr_view(a.pattern);
        const auto mask = oracle::to_mask(a.pattern);
        for (Index i = 0; i < n; ++i) {
            std::vector<Index> expect;
            for (Index j = 0; j < n; ++j) {
                if (mask[i][j]) {
                    expect.push_back(j);
                }
            }
            const auto row = v.row(i);
            CHECK(std::vector<Index>(row.begin(), row.end()) == expect);
            for (Offset p = v.row_ptr[i]; p < v.row_ptr[i + 1]; ++p) {
                const Offset slot = v.slot[p];
                CHECK(a.pattern.row_idx()[slot] == i);
                CHECK(slot >= a.pattern.col_ptr()[v.col_idx[p]]);
                CHECK(slot < a.pattern.col_ptr()[v.col_idx[p] + 1]);
            }
        }
    }
}

TEST_CASE("pattern validation catches broken invariants")
{
    CHECK_THROWS_AS(CscPattern(2, {0, 1, 1}, {0, 0}), StructureError);
    CHECK_THROWS_AS(CscPattern(2, {0, 2, 2}, {1, 0}), StructureError);
    CHECK_THROWS_AS(CscPattern(2, {0, 1, 2}, {0, 2}), StructureError);
    CHECK_NOTHROW(CscPattern(2, {0, 1, 2}, {0, 1}));
}

TEST_CASE("permutation and vector files")
{
    std::istringstream perm("2\n0\n1\n");
    CHECK(load_permutation(perm, 3).inverse() == std::vector<Index>{2, 0, 1});
    std::istringstream short_perm("0\n1\n");
    CHECK_THROWS_AS(load_permutation(short_perm, 3), DimensionError);
    std::istringstream out_of_range("0\n5\n1\n");
    CHECK_THROWS_AS(load_permutation(out_of_range, 3), ParseError);

    std::istringstream vec("1.5\n-2\n\n3e1\n");
    CHECK(load_vector(vec) == std::vector<double>{1.5, -2.0, 30.0});
}

TEST_SUITE_END();
