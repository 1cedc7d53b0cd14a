#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "levelu/depgraph.hpp"

namespace levelu {

/// Summary of one `factor` run. Serialized with fixed JSON keys and a fixed
/// CSV header; see README for the schema.
struct RunReport {
    std::string matrix;
    Index n = 0;
    Offset nz = 0;
    Offset nnz = 0;
    std::string deps;
    std::string path;       // left | right | parallel
    std::string precision;  // single | double
    bool deterministic = true;
    std::size_t threads = 1;
    std::size_t levels = 0;
    Offset edges = 0;

    double symbolic_seconds = 0.0;
    double detection_seconds = 0.0;
    double levelization_seconds = 0.0;
    double numeric_seconds = 0.0;

    std::optional<double> residual;
    std::uint64_t checksum = 0;
    std::uint64_t flops = 0;
    Index peak_concurrent_columns = 0;
    /// Level counts per mode, indexed by KernelMode.
    std::array<std::size_t, 3> mode_histogram{};

    double cpu_seconds() const { return symbolic_seconds + detection_seconds + levelization_seconds; }
};

std::string hex64(std::uint64_t v);

nlohmann::ordered_json to_json(const RunReport& r);
void write_csv(std::ostream& out, const RunReport& r);

/// Columns: level,size,max_subcolumns,mode
void write_csv(std::ostream& out, const LevelStats& s);
nlohmann::ordered_json to_json(const LevelStats& s);

/// Columns: level,writer,reader,row,col. Column and element indices are
/// written 1-based, like the Matrix Market input.
void write_csv(std::ostream& out, const HazardReport& h);
nlohmann::ordered_json to_json(const HazardReport& h);

}  // namespace levelu
