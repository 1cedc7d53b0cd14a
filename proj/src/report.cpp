#include "levelu/report.hpp"

#include <cstdio>
#include <iomanip>
#include <ostream>

namespace levelu {

namespace {

constexpr KernelMode all_modes[] = {KernelMode::SmallBlock, KernelMode::LargeBlock, KernelMode::Stream};

}  // namespace

std::string hex64(std::uint64_t v)
{
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

nlohmann::ordered_json to_json(const RunReport& r)
{
    nlohmann::ordered_json modes;
    for (const auto m : all_modes) {
        modes[std::string(to_string(m))] = r.mode_histogram[static_cast<std::size_t>(m)];
    }
    nlohmann::ordered_json j;
    j["matrix"] = r.matrix;
    j["n"] = r.n;
    j["nz"] = r.nz;
    j["nnz"] = r.nnz;
    j["deps"] = r.deps;
    j["edges"] = r.edges;
    j["levels"] = r.levels;
    j["path"] = r.path;
    j["precision"] = r.precision;
    j["deterministic"] = r.deterministic;
    j["threads"] = r.threads;
    j["times"] = {{"symbolic", r.symbolic_seconds},
                  {"detection", r.detection_seconds},
                  {"levelization", r.levelization_seconds},
                  {"cpu_total", r.cpu_seconds()},
                  {"numeric", r.numeric_seconds}};
    j["residual"] = r.residual ? nlohmann::ordered_json(*r.residual) : nlohmann::ordered_json(nullptr);
    j["checksum"] = hex64(r.checksum);
    j["flops"] = r.flops;
    j["peak_concurrent_columns"] = r.peak_concurrent_columns;
    j["mode_histogram"] = modes;
    return j;
}

void write_csv(std::ostream& out, const RunReport& r)
{
    out << "matrix,n,nz,nnz,deps,edges,levels,path,precision,deterministic,threads,"
           "symbolic_s,detection_s,levelization_s,cpu_s,numeric_s,residual,checksum,flops,"
           "peak_concurrent_columns,small_block_levels,large_block_levels,stream_levels\n";
    out << std::setprecision(9);
    out << r.matrix << ',' << r.n << ',' << r.nz << ',' << r.nnz << ',' << r.deps << ',' << r.edges << ','
        << r.levels << ',' << r.path << ',' << r.precision << ',' << (r.deterministic ? 1 : 0) << ','
        << r.threads << ',' << r.symbolic_seconds << ',' << r.detection_seconds << ',' << r.levelization_seconds
        << ',' << r.cpu_seconds() << ',' << r.numeric_seconds << ',';
    if (r.residual) {
        out << *r.residual;
    }
    out << ',' << hex64(r.checksum) << ',' << r.flops << ',' << r.peak_concurrent_columns;
    for (const auto count : r.mode_histogram) {
        out << ',' << count;
    }
    out << '\n';
}

void write_csv(std::ostream& out, const LevelStats& s)
{
    out << "level,size,max_subcolumns,mode\n";
    for (std::size_t l = 0; l < s.levels.size(); ++l) {
        const auto& info = s.levels[l];
        out << l << ',' << info.size << ',' << info.max_subcolumns << ','
            << (info.mode ? to_string(*info.mode) : std::string_view{}) << '\n';
    }
}

nlohmann::ordered_json to_json(const LevelStats& s)
{
    auto levels = nlohmann::ordered_json::array();
    for (std::size_t l = 0; l < s.levels.size(); ++l) {
        const auto& info = s.levels[l];
        nlohmann::ordered_json row;
        row["level"] = l;
        row["size"] = info.size;
        row["max_subcolumns"] = info.max_subcolumns;
        row["mode"] = info.mode ? nlohmann::ordered_json(std::string(to_string(*info.mode)))
                                : nlohmann::ordered_json(nullptr);
        levels.push_back(std::move(row));
    }
    return {{"levels", std::move(levels)}};
}

void write_csv(std::ostream& out, const HazardReport& h)
{
    out << "level,writer,reader,row,col\n";
    for (const auto& z : h.hazards) {
        out << z.level << ',' << z.writer + 1 << ',' << z.reader + 1 << ',' << z.row + 1 << ',' << z.col + 1 << '\n';
    }
}

nlohmann::ordered_json to_json(const HazardReport& h)
{
    auto rows = nlohmann::ordered_json::array();
    for (const auto& z : h.hazards) {
        rows.push_back({{"level", z.level},
                        {"writer", z.writer + 1},
                        {"reader", z.reader + 1},
                        {"row", z.row + 1},
                        {"col", z.col + 1}});
    }
    return {{"hazards", std::move(rows)}};
}

}  // namespace levelu
