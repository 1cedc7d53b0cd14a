#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "levelu/cli.hpp"
#include "levelu/matrix_market.hpp"

namespace fs = std::filesystem;
using levelu::cli::run;

namespace {

const fs::path source_dir = LEVELU_SOURCE_DIR;

std::string data(const std::string& name)
{
    return (source_dir / "tests" / "data" / name).string();
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / "levelu_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("golden outputs")
{
    const std::pair<std::vector<std::string>, std::string> cases[] = {
        {{"level-stats", data("example8.mtx")}, "example8_level_stats.csv"},
        {{"level-stats", data("diag5.mtx")}, "diag5_level_stats.csv"},
        {{"deps-compare", "--no-timings", data("example8.mtx")}, "example8_deps_compare.txt"},
        {{"deps-compare", "--no-timings", data("diag5.mtx")}, "diag5_deps_compare.txt"},
    };
    for (const auto& [args, golden] : cases) {
        CAPTURE(golden);
        const Result r = cli(args);
        CHECK(r.code == 0);
        CHECK(r.out == slurp(source_dir / "tests" / "golden" / golden));
    }
}

TEST_CASE("chain matrix gives one Stream level per column")
{
    const auto path = scratch("chain4.mtx");
    REQUIRE(cli({"generate", "chain", "--n", "4", "-o", path.string()}).code == 0);
    const Result r = cli({"level-stats", path.string()});
    CHECK(r.out == "level,size,max_subcolumns,mode\n0,1,1,Stream\n1,1,1,Stream\n2,1,1,Stream\n3,1,0,Stream\n");
}

TEST_CASE("level sizes add up to n on a random matrix")
{
    const auto path = scratch("random.mtx");
    REQUIRE(cli({"generate", "random", "--n", "300", "--density", "0.01", "--seed", "4", "-o", path.string()}).code == 0);
    std::istringstream rows(cli({"level-stats", path.string()}).out);
    std::string line;
    std::getline(rows, line);
    long total = 0;
    while (std::getline(rows, line)) {
        const auto first = line.find(',');
        const auto second = line.find(',', first + 1);
        total += std::stol(line.substr(first + 1, second - first - 1));
    }
    CHECK(total == 300);
}

TEST_CASE("factor paths report the same checksum")
{
    const auto path = scratch("random_factor.mtx");
    REQUIRE(cli({"generate", "random", "--n", "200", "--density", "0.03", "--seed", "2", "-o", path.string()}).code == 0);
    const auto checksum = [](const std::string& out) {
        const auto at = out.find("checksum");
        REQUIRE(at != std::string::npos);
        return out.substr(at, out.find('\n', at) - at);
    };
    const Result left = cli({"factor", path.string(), "--sequential", "left"});
    const Result right = cli({"factor", path.string(), "--sequential", "right"});
    const Result par = cli({"factor", path.string(), "--deps", "relaxed", "--mode-auto", "--threads", "8",
                            "--check-residual"});
    REQUIRE(left.code == 0);
    REQUIRE(right.code == 0);
    REQUIRE(par.code == 0);
    CHECK(checksum(left.out) == checksum(right.out));
    CHECK(checksum(left.out) == checksum(par.out));
    CHECK(par.out.find("residual") != std::string::npos);
}

TEST_CASE("stats files have a fixed schema")
{
    const auto json_path = scratch("stats.json");
    REQUIRE(cli({"factor", data("example8.mtx"), "--check-residual", "--stats-out", json_path.string()}).code == 0);
    const auto j = nlohmann::json::parse(slurp(json_path));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) {
        keys.push_back(k);
    }
    // nlohmann::json sorts keys
    CHECK(keys == std::vector<std::string>{"checksum", "deps", "deterministic", "edges", "flops", "levels", "matrix",
                                           "mode_histogram", "n", "nnz", "nz", "path", "peak_concurrent_columns",
                                           "precision", "residual", "threads", "times"});
    CHECK(j["n"] == 8);
    CHECK(j["levels"] == 4);
    CHECK(j["residual"].get<double>() <= 1e-12);

    const auto csv_path = scratch("stats.csv");
    REQUIRE(cli({"factor", data("example8.mtx"), "--stats-out", csv_path.string()}).code == 0);
    const std::string csv = slurp(csv_path);
    CHECK(csv.rfind("matrix,n,nz,nnz,deps,edges,levels,path,precision,deterministic,threads,", 0) == 0);
}

TEST_CASE("upward parallel run needs --allow-unsafe and then races")
{
    CHECK(cli({"factor", data("example8.mtx"), "--deps", "upward"}).code == levelu::cli::exit_usage);
    CHECK(cli({"factor", data("example8.mtx"), "--deps", "upward", "--sequential", "left"}).code == 0);
    const Result r = cli({"factor", data("example8.mtx"), "--deps", "upward", "--parallel", "--allow-unsafe",
                          "--detect-races"});
    CHECK(r.code == levelu::cli::exit_schedule);
    CHECK(r.err.find("column 4 writes (6,7) read by column 6") != std::string::npos);
}

TEST_CASE("hazards listing")
{
    const Result up = cli({"hazards", data("example8.mtx"), "--deps", "upward"});
    CHECK(up.out.find("\n0,4,6,6,7\n") != std::string::npos);
    CHECK(cli({"hazards", data("example8.mtx")}).out == "level,writer,reader,row,col\n");
    const auto j = nlohmann::json::parse(cli({"hazards", data("example8.mtx"), "--deps", "upward", "--json"}).out);
    CHECK(j["hazards"].size() == 2);
}

TEST_CASE("solve")
{
    const auto x_path = scratch("x.txt");
    const Result r = cli({"solve", data("two.mtx"), "--rhs", data("two_rhs.txt"), "--out", x_path.string()});
    REQUIRE(r.code == 0);
    CHECK(levelu::load_vector(x_path) == std::vector<double>{1.0, 1.0});

    const auto rhs = scratch("b5.txt");
    std::ofstream(rhs) << "3\n-1\n4\n1\n-5\n";
    const auto identity = scratch("eye5.mtx");
    std::ofstream(identity) << "%%MatrixMarket matrix coordinate real general\n5 5 5\n1 1 1\n2 2 1\n3 3 1\n4 4 1\n5 5 1\n";
    const Result eye = cli({"solve", identity.string(), "--rhs", rhs.string()});
    CHECK(eye.out == "3\n-1\n4\n1\n-5\n");

    const auto big = scratch("random200.mtx");
    REQUIRE(cli({"generate", "random", "--n", "200", "--density", "0.05", "--seed", "8", "-o", big.string()}).code == 0);
    const auto b200 = scratch("b200.txt");
    {
        std::ofstream f(b200);
        for (int i = 0; i < 200; ++i) {
            f << (i % 7) - 3.5 << '\n';
        }
    }
    const Result s = cli({"solve", big.string(), "--rhs", b200.string(), "--out", scratch("x200.txt").string()});
    REQUIRE(s.code == 0);
    CHECK(std::stod(s.out.substr(s.out.find(' ') + 1)) <= 1e-10);

    CHECK(cli({"solve", data("two.mtx"), "--rhs", rhs.string()}).code == levelu::cli::exit_usage);
}

TEST_CASE("solve with a symmetric permutation")
{
    const auto perm = scratch("perm2.txt");
    std::ofstream(perm) << "1\n0\n";
    const auto x_path = scratch("xp.txt");
    const Result r = cli({"solve", data("two.mtx"), "--rhs", data("two_rhs.txt"), "--perm", perm.string(), "--out",
                          x_path.string()});
    REQUIRE(r.code == 0);
    const auto x = levelu::load_vector(x_path);
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(1.0));
}

TEST_CASE("exit codes")
{
    CHECK(cli({"--help"}).code == 0);
    CHECK(cli({}).code == levelu::cli::exit_usage);
    CHECK(cli({"factor"}).code == levelu::cli::exit_usage);
    CHECK(cli({"factor", data("missing.mtx")}).code == levelu::cli::exit_usage);
    CHECK(cli({"factor", data("example8.mtx"), "--deps", "sideways"}).code == levelu::cli::exit_usage);

    const auto singular = scratch("singular.mtx");
    std::ofstream(singular) << "%%MatrixMarket matrix coordinate real general\n2 2 4\n1 1 1\n1 2 1\n2 1 1\n2 2 1\n";
    const Result r = cli({"factor", singular.string()});
    CHECK(r.code == levelu::cli::exit_numeric);
    CHECK(r.err.find("pivot") != std::string::npos);
}

TEST_SUITE_END();
