#include "levelu/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "levelu/depgraph.hpp"
#include "levelu/matrix_market.hpp"
#include "levelu/numeric.hpp"
#include "levelu/report.hpp"
#include "levelu/resource_model.hpp"
#include "levelu/symbolic.hpp"
#include "levelu/synthetic.hpp"

namespace levelu::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

class UsageError : public Error {
public:
    using Error::Error;
};

struct InputOptions {
    std::string matrix;
    std::string perm;
    std::string row_perm;
    std::string col_perm;
    bool no_inject = false;
};

struct ResourceOptions {
    Index warps = 96;
    Index stream_threshold = 16;
    std::uint64_t mem_budget = std::uint64_t{1} << 30;

    ResourceModel model(std::uint64_t scalar_size) const
    {
        ResourceModel rm;
        rm.total_warps = warps;
        rm.stream_threshold = stream_threshold;
        rm.memory_budget_bytes = mem_budget;
        rm.scalar_size_bytes = scalar_size;
        rm.validate();
        return rm;
    }
};

struct FactorFlags {
    std::string deps = "relaxed";
    std::string sequential;
    bool parallel = false;
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
    bool deterministic = true;
    bool mode_auto = true;
    std::string precision = "double";
    std::string stats_out;
    bool check_residual = false;
    bool detect_races = false;
    bool allow_unsafe = false;
};

void add_input_options(CLI::App& cmd, InputOptions& in)
{
    cmd.add_option("matrix", in.matrix, "Matrix Market file")->required();
    auto* perm = cmd.add_option("--perm", in.perm, "symmetric ordering, one 0-based index per line");
    auto* row = cmd.add_option("--row-perm", in.row_perm, "row ordering");
    auto* col = cmd.add_option("--col-perm", in.col_perm, "column ordering");
    row->needs(col)->excludes(perm);
    col->needs(row)->excludes(perm);
    cmd.add_flag("--no-inject-diagonal", in.no_inject, "fail instead of adding missing diagonal entries");
}

void add_resource_options(CLI::App& cmd, ResourceOptions& r)
{
    cmd.add_option("--warps", r.warps, "total simulated warps")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_option("--stream-threshold", r.stream_threshold, "largest level run in Stream mode")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--mem-budget", r.mem_budget, "bytes available for dense column caches")->capture_default_str();
}

void add_deps_option(CLI::App& cmd, std::string& deps)
{
    cmd.add_option("--deps", deps, "dependency detection method")
        ->check(CLI::IsMember({"upward", "exact", "relaxed"}))
        ->capture_default_str();
}

void add_factor_options(CLI::App& cmd, FactorFlags& f)
{
    add_deps_option(cmd, f.deps);
    auto* seq = cmd.add_option("--sequential", f.sequential, "sequential path")->check(CLI::IsMember({"left", "right"}));
    auto* par = cmd.add_flag("--parallel", f.parallel, "level-parallel path (default)");
    seq->excludes(par);
    cmd.add_option("--threads", f.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    cmd.add_flag("--deterministic,!--no-deterministic,!--atomic", f.deterministic,
                 "ordered accumulation (default) or atomic updates");
    cmd.add_flag("--mode-auto", f.mode_auto, "pick the kernel mode per level from its size (always on)");
    cmd.add_option("--precision", f.precision, "scalar type")
        ->check(CLI::IsMember({"single", "double"}))
        ->capture_default_str();
    cmd.add_option("--stats-out", f.stats_out, "write the run report to PATH.csv or PATH.json");
    cmd.add_flag("--check-residual", f.check_residual, "compute ||A - LU||_F / ||A||_F");
    cmd.add_flag("--detect-races", f.detect_races, "check every level for read-write conflicts while it runs");
    cmd.add_flag("--allow-unsafe", f.allow_unsafe, "permit --deps upward with the parallel path");
}

struct Problem {
    std::string name;
    CscMatrix a;
    Permutation row;
    Permutation col;
    bool permuted = false;
};

Problem load_problem(const InputOptions& in)
{
    Problem p;
    p.name = std::filesystem::path(in.matrix).filename().string();
    p.a = to_csc(load_matrix_market(std::filesystem::path(in.matrix)));
    const Index n = p.a.n();
    if (!in.perm.empty()) {
        p.row = load_permutation(std::filesystem::path(in.perm), n);
        p.col = p.row;
        p.permuted = true;
    } else if (!in.row_perm.empty()) {
        p.row = load_permutation(std::filesystem::path(in.row_perm), n);
        p.col = load_permutation(std::filesystem::path(in.col_perm), n);
        p.permuted = true;
    } else {
        p.row = Permutation::identity(n);
        p.col = p.row;
    }
    if (p.permuted) {
        p.a = permute(p.a, p.row, p.col);
    }
    return p;
}

struct Analysis {
    std::shared_ptr<const FilledPattern> fp;
    DependencyGraph graph{DependencyMethod::Relaxed, {0}, {}};
    LevelSchedule schedule;
    LevelStats stats;
    std::vector<LevelPlan> plans;
    double symbolic_seconds = 0.0;
    double detection_seconds = 0.0;
    double levelization_seconds = 0.0;
};

Analysis analyze(const CscMatrix& a, DependencyMethod method, const ResourceModel& rm, bool no_inject,
                 std::ostream& err)
{
    Analysis an;
    auto t0 = Clock::now();
    an.fp = std::make_shared<const FilledPattern>(symbolic_fillin(a.pattern, {.inject_missing_diagonal = !no_inject}));
    an.symbolic_seconds = seconds_since(t0);
    if (!an.fp->injected_diagonals.empty()) {
        err << "warning: added " << an.fp->injected_diagonals.size()
            << " explicit zero diagonal entries (first at column " << an.fp->injected_diagonals.front() + 1 << ")\n";
    }
    t0 = Clock::now();
    an.graph = detect(*an.fp, method);
    an.detection_seconds = seconds_since(t0);
    t0 = Clock::now();
    an.schedule = levelize(an.graph);
    an.levelization_seconds = seconds_since(t0);
    an.stats = level_stats(*an.fp, an.schedule);
    an.plans = plan_schedule(an.schedule, an.stats, a.n(), rm);
    for (std::size_t l = 0; l < an.plans.size(); ++l) {
        an.stats.levels[l].mode = an.plans[l].mode;
    }
    return an;
}

void check_flags(const FactorFlags& f)
{
    const bool parallel = f.sequential.empty();
    if (parallel && f.deps == "upward" && !f.allow_unsafe) {
        throw UsageError("--deps upward is unsafe for the parallel path; add --allow-unsafe to run it anyway");
    }
}

template <class T>
LuFactors<T> factor_problem(const Problem& p, const Analysis& an, const FactorFlags& f, const ResourceModel& rm,
                            RunReport& report)
{
    FactorOptions opts;
    opts.deterministic = f.deterministic;
    opts.worker_count = f.threads;
    opts.resource = rm;
    opts.detect_races = f.detect_races || debug_build;

    report.matrix = p.name;
    report.n = p.a.n();
    report.nz = an.fp->source_nnz;
    report.nnz = an.fp->nnz();
    report.deps = std::string(to_string(an.graph.method()));
    report.edges = an.graph.edge_count();
    report.levels = an.schedule.level_count();
    report.precision = f.precision;
    report.deterministic = f.deterministic;
    report.symbolic_seconds = an.symbolic_seconds;
    report.detection_seconds = an.detection_seconds;
    report.levelization_seconds = an.levelization_seconds;
    for (const auto& plan : an.plans) {
        ++report.mode_histogram[static_cast<std::size_t>(plan.mode)];
    }

    const auto t0 = Clock::now();
    LuFactors<T> lu;
    if (f.sequential == "left") {
        report.path = "left";
        report.threads = 1;
        lu = factor_left_looking<T>(p.a, an.fp, opts);
    } else if (f.sequential == "right") {
        report.path = "right";
        report.threads = 1;
        lu = factor_right_looking_seq<T>(p.a, an.fp, opts);
    } else {
        report.path = "parallel";
        report.threads = f.threads;
        auto result = factor_parallel<T>(p.a, an.fp, an.schedule, an.plans, opts);
        lu = std::move(result.factors);
        report.flops = result.stats.flops;
        report.peak_concurrent_columns = result.stats.peak_concurrent_columns;
    }
    report.numeric_seconds = seconds_since(t0);
    report.checksum = checksum(lu);
    if (f.check_residual) {
        report.residual = residual(p.a, lu);
    }
    return lu;
}

void print_summary(std::ostream& out, const RunReport& r)
{
    out << "matrix        " << r.matrix << '\n';
    out << "order         n=" << r.n << " nz=" << r.nz << " nnz=" << r.nnz << '\n';
    out << "dependencies  " << r.deps << ": " << r.edges << " edges, " << r.levels << " levels\n";
    out << "path          " << r.path;
    if (r.path == "parallel") {
        out << " (" << (r.deterministic ? "deterministic" : "atomic") << ", " << r.threads << " threads)";
    }
    out << ' ' << r.precision << '\n';
    out << "modes         SmallBlock=" << r.mode_histogram[0] << " LargeBlock=" << r.mode_histogram[1]
        << " Stream=" << r.mode_histogram[2] << '\n';
    out << std::setprecision(6);
    out << "cpu time      " << r.cpu_seconds() << " s (symbolic " << r.symbolic_seconds << ", detection "
        << r.detection_seconds << ", levelization " << r.levelization_seconds << ")\n";
    out << "numeric time  " << r.numeric_seconds << " s\n";
    if (r.residual) {
        out << std::setprecision(3) << std::scientific << "residual      " << *r.residual << '\n'
            << std::defaultfloat;
    }
    out << "checksum      " << hex64(r.checksum) << '\n';
}

template <class Writer>
void write_stats_file(const std::string& path, Writer&& write)
{
    std::ofstream f(path);
    if (!f) {
        throw ParseError("cannot write " + path);
    }
    write(f, std::filesystem::path(path).extension() == ".json");
}

template <class T>
int run_factor(const InputOptions& in, const ResourceOptions& ro, const FactorFlags& f, std::ostream& out,
               std::ostream& err)
{
    check_flags(f);
    const Problem p = load_problem(in);
    const ResourceModel rm = ro.model(sizeof(T));
    const Analysis an = analyze(p.a, *parse_dependency_method(f.deps), rm, in.no_inject, err);
    RunReport report;
    factor_problem<T>(p, an, f, rm, report);
    print_summary(out, report);
    if (!f.stats_out.empty()) {
        write_stats_file(f.stats_out, [&](std::ostream& o, bool json) {
            if (json) {
                o << to_json(report).dump(2) << '\n';
            } else {
                write_csv(o, report);
            }
        });
    }
    return exit_ok;
}

template <class T>
int run_solve(const InputOptions& in, const ResourceOptions& ro, const FactorFlags& f, const std::string& rhs_path,
              const std::string& out_path, std::ostream& out, std::ostream& err)
{
    check_flags(f);
    const Problem p = load_problem(in);
    const std::vector<double> b = load_vector(std::filesystem::path(rhs_path));
    if (static_cast<Index>(b.size()) != p.a.n()) {
        throw DimensionError("right-hand side has " + std::to_string(b.size()) + " entries, matrix order is "
                             + std::to_string(p.a.n()));
    }
    const ResourceModel rm = ro.model(sizeof(T));
    const Analysis an = analyze(p.a, *parse_dependency_method(f.deps), rm, in.no_inject, err);
    RunReport report;
    const LuFactors<T> lu = factor_problem<T>(p, an, f, rm, report);

    const Index n = p.a.n();
    std::vector<T> pb(n);
    for (Index i = 0; i < n; ++i) {
        pb[i] = static_cast<T>(b[p.row.inverse()[i]]);
    }
    const std::vector<T> y = upper_solve(lu, std::span<const T>(lower_solve(lu, std::span<const T>(pb))));
    std::vector<double> x(n);
    for (Index j = 0; j < n; ++j) {
        x[p.col.inverse()[j]] = static_cast<double>(y[j]);
    }

    // residual against the matrix as read, before any reordering
    const CscMatrix original = p.permuted ? permute(p.a, p.row.inverted(), p.col.inverted()) : p.a;
    const std::vector<double> ax = multiply(original, x);
    double num = 0.0, den = 0.0;
    for (Index i = 0; i < n; ++i) {
        num = std::max(num, std::abs(ax[i] - b[i]));
        den = std::max(den, std::abs(b[i]));
    }
    const double rel = den > 0.0 ? num / den : num;

    if (out_path.empty()) {
        write_vector(out, x);
        err << "residual " << std::setprecision(3) << std::scientific << rel << '\n';
    } else {
        std::ofstream f_out(out_path);
        if (!f_out) {
            throw ParseError("cannot write " + out_path);
        }
        write_vector(f_out, x);
        out << "residual " << std::setprecision(3) << std::scientific << rel << '\n';
    }
    return exit_ok;
}

int run_level_stats(const InputOptions& in, const ResourceOptions& ro, const std::string& deps,
                    const std::string& stats_out, std::ostream& out, std::ostream& err)
{
    const Problem p = load_problem(in);
    const Analysis an = analyze(p.a, *parse_dependency_method(deps), ro.model(sizeof(double)), in.no_inject, err);
    write_csv(out, an.stats);
    if (!stats_out.empty()) {
        write_stats_file(stats_out, [&](std::ostream& o, bool json) {
            if (json) {
                o << to_json(an.stats).dump(2) << '\n';
            } else {
                write_csv(o, an.stats);
            }
        });
    }
    return exit_ok;
}

int run_hazards(const InputOptions& in, const std::string& deps, bool json, std::ostream& out, std::ostream& err)
{
    const Problem p = load_problem(in);
    const Analysis an = analyze(p.a, *parse_dependency_method(deps), ResourceModel{}, in.no_inject, err);
    const HazardReport h = simulate_hazards(*an.fp, an.schedule);
    if (json) {
        out << to_json(h).dump(2) << '\n';
    } else {
        write_csv(out, h);
    }
    return exit_ok;
}

bool is_superset(const DependencyGraph& big, const DependencyGraph& small)
{
    for (Index j = 0; j < small.n(); ++j) {
        const auto b = big.deps(j);
        const auto s = small.deps(j);
        if (!std::includes(b.begin(), b.end(), s.begin(), s.end())) {
            return false;
        }
    }
    return true;
}

int run_deps_compare(const InputOptions& in, bool no_timings, int repeat, std::ostream& out, std::ostream& err)
{
    const Problem p = load_problem(in);
    const auto fp = symbolic_fillin(p.a.pattern, {.inject_missing_diagonal = !in.no_inject});
    if (!fp.injected_diagonals.empty()) {
        err << "warning: added " << fp.injected_diagonals.size() << " explicit zero diagonal entries\n";
    }

    struct Row {
        DependencyMethod method;
        DependencyGraph graph;
        LevelSchedule schedule;
        double seconds;
    };
    std::vector<Row> rows;
    for (const auto method : {DependencyMethod::Upward, DependencyMethod::DoubleUExact, DependencyMethod::Relaxed}) {
        double best = std::numeric_limits<double>::infinity();
        DependencyGraph g{method, {0}, {}};
        for (int r = 0; r < std::max(1, repeat); ++r) {
            const auto t0 = Clock::now();
            g = detect(fp, method);
            best = std::min(best, seconds_since(t0));
        }
        auto s = levelize(g);
        rows.push_back({method, std::move(g), std::move(s), best});
    }

    out << "method,edges,levels" << (no_timings ? "" : ",detect_seconds") << '\n';
    for (const auto& r : rows) {
        out << to_string(r.method) << ',' << r.graph.edge_count() << ',' << r.schedule.level_count();
        if (!no_timings) {
            out << ',' << std::setprecision(6) << r.seconds;
        }
        out << '\n';
    }
    const bool superset = is_superset(rows[2].graph, rows[1].graph) && is_superset(rows[1].graph, rows[0].graph);
    const bool same_partition = rows[2].schedule.levels == rows[1].schedule.levels;
    out << "superset relaxed>=exact>=upward: " << (superset ? "ok" : "VIOLATED") << '\n';
    out << "identical partition relaxed/exact: " << (same_partition ? "yes" : "no") << '\n';
    out << "level inflation relaxed-exact: "
        << static_cast<long long>(rows[2].schedule.level_count()) - static_cast<long long>(rows[1].schedule.level_count())
        << '\n';
    if (!no_timings && rows[2].seconds > 0.0) {
        out << "exact/relaxed detection time ratio: " << std::setprecision(4) << rows[1].seconds / rows[2].seconds
            << '\n';
    }
    return superset ? exit_ok : exit_schedule;
}

struct GenerateFlags {
    std::string kind;
    std::string output;
    Index n = 100;
    double density = 0.05;
    std::uint64_t seed = 1;
    Index band = 20;
    Index blocks = 50;
    Index block_size = 100;
    Index border = 8;
};

int run_generate(const GenerateFlags& g, std::ostream& out)
{
    CscMatrix a;
    if (g.kind == "random") {
        a = synthetic::random_diag_dominant(g.n, g.density, g.seed);
    } else if (g.kind == "banded") {
        a = synthetic::banded(g.n, g.band);
    } else if (g.kind == "block-arrow") {
        a = synthetic::block_arrow(g.blocks, g.block_size, g.border);
    } else if (g.kind == "diagonal") {
        a = synthetic::diagonal(g.n);
    } else if (g.kind == "chain") {
        a = synthetic::chain(g.n);
    } else {
        a = synthetic::double_u_example();
    }
    if (g.output.empty()) {
        write_matrix_market(out, a);
    } else {
        std::ofstream f(g.output);
        if (!f) {
            throw ParseError("cannot write " + g.output);
        }
        write_matrix_market(f, a);
    }
    return exit_ok;
}

void report_hazards(std::ostream& err, const std::vector<Hazard>& hazards)
{
    constexpr std::size_t shown = 20;
    for (std::size_t i = 0; i < std::min(shown, hazards.size()); ++i) {
        const auto& h = hazards[i];
        err << "race: level " << h.level << ": column " << h.writer + 1 << " writes (" << h.row + 1 << ","
            << h.col + 1 << ") read by column " << h.reader + 1 << '\n';
    }
    if (hazards.size() > shown) {
        err << "race: ... " << hazards.size() - shown << " more\n";
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Level-scheduled sparse LU factorization benchmark"};
    app.name("levelu");
    app.require_subcommand(1);

    InputOptions in;
    ResourceOptions ro;
    FactorFlags ff;
    std::string deps = "relaxed";
    std::string stats_out;
    std::string rhs, solution;
    bool no_timings = false;
    bool json = false;
    int repeat = 1;
    GenerateFlags gen;

    auto* factor = app.add_subcommand("factor", "analyze and factorize a matrix");
    add_input_options(*factor, in);
    add_resource_options(*factor, ro);
    add_factor_options(*factor, ff);

    auto* solve = app.add_subcommand("solve", "factorize and solve A x = b");
    add_input_options(*solve, in);
    add_resource_options(*solve, ro);
    add_factor_options(*solve, ff);
    solve->add_option("--rhs", rhs, "right-hand side, one value per line")->required();
    solve->add_option("--out", solution, "write x here instead of stdout");

    auto* stats = app.add_subcommand("level-stats", "per-level size, subcolumn count and kernel mode as CSV");
    add_input_options(*stats, in);
    add_resource_options(*stats, ro);
    add_deps_option(*stats, deps);
    stats->add_option("--stats-out", stats_out, "also write PATH.csv or PATH.json");

    auto* compare = app.add_subcommand("deps-compare", "compare the three dependency detectors");
    add_input_options(*compare, in);
    compare->add_flag("--no-timings", no_timings, "omit wall-clock columns");
    compare->add_option("--repeat", repeat, "time each detector this many times, keep the fastest")
        ->check(CLI::PositiveNumber);

    auto* hazards = app.add_subcommand("hazards", "list read-write hazards of a schedule");
    add_input_options(*hazards, in);
    add_deps_option(*hazards, deps);
    hazards->add_flag("--json", json, "JSON instead of CSV");

    auto* generate = app.add_subcommand("generate", "write a synthetic test matrix");
    generate->add_option("kind", gen.kind, "matrix family")
        ->required()
        ->check(CLI::IsMember({"random", "banded", "block-arrow", "diagonal", "chain", "example8"}));
    generate->add_option("-o,--output", gen.output, "output file (default stdout)");
    generate->add_option("--n", gen.n, "order")->check(CLI::PositiveNumber);
    generate->add_option("--density", gen.density, "off-diagonal density")->check(CLI::Range(0.0, 1.0));
    generate->add_option("--seed", gen.seed, "random seed");
    generate->add_option("--band", gen.band, "half bandwidth")->check(CLI::NonNegativeNumber);
    generate->add_option("--blocks", gen.blocks, "block count")->check(CLI::PositiveNumber);
    generate->add_option("--block-size", gen.block_size, "block order")->check(CLI::PositiveNumber);
    generate->add_option("--border", gen.border, "border width")->check(CLI::NonNegativeNumber);

    std::vector<const char*> argv{"levelu"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (factor->parsed()) {
            return ff.precision == "single" ? run_factor<float>(in, ro, ff, out, err)
                                            : run_factor<double>(in, ro, ff, out, err);
        }
        if (solve->parsed()) {
            return ff.precision == "single" ? run_solve<float>(in, ro, ff, rhs, solution, out, err)
                                            : run_solve<double>(in, ro, ff, rhs, solution, out, err);
        }
        if (stats->parsed()) {
            return run_level_stats(in, ro, deps, stats_out, out, err);
        }
        if (compare->parsed()) {
            return run_deps_compare(in, no_timings, repeat, out, err);
        }
        if (hazards->parsed()) {
            return run_hazards(in, deps, json, out, err);
        }
        return run_generate(gen, out);
    } catch (const PivotError& e) {
        err << "error: " << e.what() << '\n';
        return exit_numeric;
    } catch (const ScheduleHazardError& e) {
        err << "error: read-write hazard detected during parallel factorization\n";
        report_hazards(err, e.hazards());
        return exit_schedule;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

}  // namespace levelu::cli
