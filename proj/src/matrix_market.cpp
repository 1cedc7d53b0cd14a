#include "levelu/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "levelu/error.hpp"

namespace levelu {

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool blank_or_comment(const std::string& line)
{
    const auto first = line.find_first_not_of(" \t\r");
    return first == std::string::npos || line[first] == '%';
}

std::ifstream open(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    return in;
}

}  // namespace

Triplets load_matrix_market(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty MatrixMarket stream");
    }
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
        throw ParseError("malformed MatrixMarket header: " + line);
    }
    if (lower(format) != "coordinate") {
        throw ParseError("only coordinate format is supported, got '" + format + "'");
    }
    field = lower(field);
    if (field == "pattern") {
        throw ParseError("pattern matrices carry no values");
    }
    if (field != "real" && field != "integer") {
        throw ParseError("unsupported field '" + field + "'");
    }
    symmetry = lower(symmetry);
    if (symmetry != "general" && symmetry != "symmetric") {
        throw ParseError("unsupported symmetry '" + symmetry + "'");
    }
    const bool symmetric = symmetry == "symmetric";

    do {
        if (!std::getline(in, line)) {
            throw ParseError("missing size line");
        }
    } while (blank_or_comment(line));

    long long rows = 0, cols = 0, declared = 0;
    {
        std::istringstream size(line);
        if (!(size >> rows >> cols >> declared) || rows < 0 || cols < 0 || declared < 0) {
            throw ParseError("malformed size line: " + line);
        }
    }
    if (rows != cols) {
        throw ParseError("matrix is not square: " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (rows > std::numeric_limits<Index>::max()) {
        throw ParseError("matrix order too large");
    }

    Triplets t{static_cast<Index>(rows), static_cast<Index>(cols), {}};
    t.entries.reserve(static_cast<std::size_t>(symmetric ? 2 * declared : declared));
    long long read = 0;
    while (read < declared && std::getline(in, line)) {
        if (blank_or_comment(line)) {
            continue;
        }
        std::istringstream entry(line);
        long long i = 0, j = 0;
        double v = 0.0;
        if (!(entry >> i >> j >> v)) {
            throw ParseError("malformed entry line: " + line);
        }
        if (i < 1 || i > rows || j < 1 || j > cols) {
            throw ParseError("entry (" + std::to_string(i) + ", " + std::to_string(j)
                             + ") outside declared bounds");
        }
        const auto r = static_cast<Index>(i - 1);
        const auto c = static_cast<Index>(j - 1);
        t.entries.push_back({r, c, v});
        if (symmetric && r != c) {
            t.entries.push_back({c, r, v});
        }
        ++read;
    }
    if (read != declared) {
        throw ParseError("expected " + std::to_string(declared) + " entries, found " + std::to_string(read));
    }
    return t;
}

Triplets load_matrix_market(const std::filesystem::path& path)
{
    auto in = open(path);
    return load_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const CscMatrix& a)
{
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.n() << ' ' << a.n() << ' ' << a.nnz() << '\n';
    out << std::setprecision(17);
    for (Index j = 0; j < a.n(); ++j) {
        for (Offset p = a.pattern.col_ptr()[j]; p < a.pattern.col_ptr()[j + 1]; ++p) {
            out << a.pattern.row_idx()[p] + 1 << ' ' << j + 1 << ' ' << a.values[p] << '\n';
        }
    }
}

Permutation load_permutation(std::istream& in, Index n)
{
    std::vector<Index> order;
    std::string line;
    while (std::getline(in, line)) {
        if (blank_or_comment(line)) {
            continue;
        }
        std::istringstream ls(line);
        long long k = 0;
        if (!(ls >> k)) {
            throw ParseError("malformed permutation line: " + line);
        }
        if (k < 0 || k >= n) {
            throw ParseError("permutation index " + std::to_string(k) + " out of range");
        }
        order.push_back(static_cast<Index>(k));
    }
    if (static_cast<Index>(order.size()) != n) {
        throw DimensionError("permutation has " + std::to_string(order.size()) + " entries, expected "
                             + std::to_string(n));
    }
    return Permutation::from_order(std::move(order));
}

Permutation load_permutation(const std::filesystem::path& path, Index n)
{
    auto in = open(path);
    return load_permutation(in, n);
}

std::vector<double> load_vector(std::istream& in)
{
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        if (blank_or_comment(line)) {
            continue;
        }
        std::istringstream ls(line);
        double x = 0.0;
        if (!(ls >> x)) {
            throw ParseError("malformed vector line: " + line);
        }
        v.push_back(x);
    }
    return v;
}

std::vector<double> load_vector(const std::filesystem::path& path)
{
    auto in = open(path);
    return load_vector(in);
}

void write_vector(std::ostream& out, const std::vector<double>& v)
{
    out << std::setprecision(17);
    for (const double x : v) {
        out << x << '\n';
    }
}

}  // namespace levelu
