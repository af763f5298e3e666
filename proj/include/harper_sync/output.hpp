#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "harper_sync/classical.hpp"
#include "harper_sync/config.hpp"
#include "harper_sync/measure_sync.hpp"
#include "harper_sync/observables.hpp"
#include "harper_sync/sweep.hpp"

namespace harper::io {

/// 17 significant digits, shortest of fixed/scientific ("%.17g"), locale-free.
std::string format_number(double v);
/// Shortest text that parses back to the same double.
std::string format_shortest(double v);

/// Header line then one line per row; values row-major.
std::string table_csv(const std::vector<std::string>& columns, const std::vector<double>& values);
/// rows x cols values, no header.
std::string matrix_csv(const std::vector<double>& values, std::size_t rows, std::size_t cols);
/// {"columns": [...], "rows": [[...], ...]}
std::string table_json(const std::vector<std::string>& columns, const std::vector<double>& values);
/// {"rows": [[...], ...]}
std::string matrix_json(const std::vector<double>& values, std::size_t rows, std::size_t cols);

/// Writes bytes verbatim; failures carry the OS message.
void write_file(const std::filesystem::path& path, const std::string& bytes);

/// Recorded classical states, step indices first_step, first_step + stride, ...
struct TrajectoryArtifact {
    std::size_t first_step = 1;
    std::size_t stride = 1;
    classical::TrajectorySeries states;
    double e_int = 0.0;
};

struct JpdArtifact {
    double eps = 0.0;
    sync::JpdResult result;
};

/// Per-kick observables of one evolution; values row-major [kick][observable].
struct SeriesArtifact {
    double eps = 0.0;
    std::vector<std::size_t> kicks;
    std::vector<sweep::Observable> observables;
    std::vector<double> values;
};

struct SurfaceArtifact {
    sweep::SweepSurface surface;
    std::optional<std::size_t> onset;
};

struct MiArtifact {
    double eps = 0.0;
    std::size_t kicks = 0;
    observables::MutualInformationMap map;
};

struct Artifacts {
    std::optional<TrajectoryArtifact> trajectory;
    std::optional<JpdArtifact> jpd;
    std::optional<sweep::ClassicalSweepResult> classical_sweep;
    std::optional<SeriesArtifact> series;
    std::optional<SurfaceArtifact> surface;
    std::optional<MiArtifact> mi;
};

/// Writes every present artifact plus config.txt into cfg.out (created if
/// needed) and returns the paths written, in order.
std::vector<std::filesystem::path> write_outputs(const Artifacts& artifacts, const cli::RunConfig& cfg);

} // namespace harper::io
