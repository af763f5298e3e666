#include "harper_sync/output.hpp"

#include <json.hpp>

#include <array>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace harper::io {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

void append_row(std::string& out, const double* row, std::size_t cols) {
    for (std::size_t c = 0; c < cols; ++c) {
        if (c > 0) out += ',';
        out += format_number(row[c]);
    }
}

std::size_t row_count(const std::vector<double>& values, std::size_t cols) {
    if (cols == 0 || values.size() % cols != 0) throw std::invalid_argument("values do not fill whole rows");
    return values.size() / cols;
}

std::string json_text(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string quote(const std::string& s) { return ordered_json(s).dump(); }

std::string table_text(const std::vector<std::string>& columns, const std::vector<double>& values,
                       cli::OutputFormat f) {
    return f == cli::OutputFormat::Csv ? table_csv(columns, values) : table_json(columns, values);
}

std::string matrix_text(const std::vector<double>& values, std::size_t rows, std::size_t cols,
                        cli::OutputFormat f) {
    return f == cli::OutputFormat::Csv ? matrix_csv(values, rows, cols) : matrix_json(values, rows, cols);
}

/// CSV: a line holding m, then m rows of m values. JSON: {"m": m, "rows": ...}.
std::string grid_text(const sync::DensityGrid& g, cli::OutputFormat f) {
    const std::size_t m = g.m();
    if (f == cli::OutputFormat::Csv) return std::to_string(m) + "\n" + matrix_csv(g.cells(), m, m);
    return "{\n  \"m\": " + std::to_string(m) + "," + matrix_json(g.cells(), m, m).substr(1);
}

std::vector<std::size_t> site_axis(std::size_t n) {
    std::vector<std::size_t> axis(n);
    for (std::size_t i = 0; i < n; ++i) axis[i] = i + 1;
    return axis;
}

std::string extension(cli::OutputFormat f) { return f == cli::OutputFormat::Csv ? ".csv" : ".json"; }

ordered_json verdict_json(const sync::SyncVerdict& v) {
    return {{"max_delta_rho", v.max_delta_rho}, {"rho_c", v.threshold}, {"synchronized", v.synchronized}};
}

std::string coupling_name(quantum::Coupling c) { return c == quantum::Coupling::Global ? "global" : "local"; }

ordered_json quantum_meta_json(const sweep::QuantumMeta& m) {
    return {{"n", m.base.n},
            {"tau", m.base.tau},
            {"g", m.base.g},
            {"coupling", coupling_name(m.base.coupling)},
            {"propagator", m.base.form == quantum::PropagatorForm::Ring ? "ring" : "bessel"},
            {"windings", m.base.windings},
            {"ic", {m.x0, m.y0}},
            {"propagation", m.propagation == quantum::Propagation::Fft ? "fft" : "dense"}};
}

} // namespace

std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return {buf.data(), ptr};
}

std::string format_shortest(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return {buf.data(), ptr};
}

std::string table_csv(const std::vector<std::string>& columns, const std::vector<double>& values) {
    const std::size_t rows = row_count(values, columns.size());
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c > 0 ? "," : "") + columns[c];
    out += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        append_row(out, values.data() + r * columns.size(), columns.size());
        out += '\n';
    }
    return out;
}

std::string matrix_csv(const std::vector<double>& values, std::size_t rows, std::size_t cols) {
    if (values.size() != rows * cols) throw std::invalid_argument("matrix shape mismatch");
    std::string out;
    for (std::size_t r = 0; r < rows; ++r) {
        append_row(out, values.data() + r * cols, cols);
        out += '\n';
    }
    return out;
}

std::string table_json(const std::vector<std::string>& columns, const std::vector<double>& values) {
    const std::size_t rows = row_count(values, columns.size());
    std::string out = "{\n  \"columns\": [";
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c > 0 ? ", " : "") + quote(columns[c]);
    out += "],\n  \"rows\": [";
    for (std::size_t r = 0; r < rows; ++r) {
        out += r > 0 ? ",\n    [" : "\n    [";
        append_row(out, values.data() + r * columns.size(), columns.size());
        out += ']';
    }
    out += rows > 0 ? "\n  ]\n}\n" : "]\n}\n";
    return out;
}

std::string matrix_json(const std::vector<double>& values, std::size_t rows, std::size_t cols) {
    if (values.size() != rows * cols) throw std::invalid_argument("matrix shape mismatch");
    std::string out = "{\n  \"rows\": [";
    for (std::size_t r = 0; r < rows; ++r) {
        out += r > 0 ? ",\n    [" : "\n    [";
        append_row(out, values.data() + r * cols, cols);
        out += ']';
    }
    out += rows > 0 ? "\n  ]\n}\n" : "]\n}\n";
    return out;
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw std::runtime_error("writing '" + path.string() + "' failed: " + std::strerror(errno));
}

std::vector<fs::path> write_outputs(const Artifacts& a, const cli::RunConfig& cfg) {
    const fs::path dir(cfg.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

    const auto fmt = cfg.format;
    std::vector<fs::path> written;
    auto emit = [&](const std::string& name, const std::string& bytes) {
        const fs::path p = dir / name;
        write_file(p, bytes);
        written.push_back(p);
    };

    emit("config.txt", cli::format_config(cfg));

    if (a.trajectory) {
        const auto& t = *a.trajectory;
        std::vector<double> values;
        values.reserve(t.states.size() * 5);
        for (std::size_t i = 0; i < t.states.size(); ++i) {
            const auto& s = t.states[i];
            values.insert(values.end(), {static_cast<double>(t.first_step + i * t.stride), s.xA, s.pA, s.xB, s.pB});
        }
        emit("trajectory" + extension(fmt), table_text({"n", "xA", "pA", "xB", "pB"}, values, fmt));
        emit("trajectory_summary.json",
             json_text({{"samples", t.states.size()}, {"first_step", t.first_step}, {"stride", t.stride},
                        {"e_int", t.e_int}}));
    }

    if (a.jpd) {
        const auto& r = a.jpd->result;
        const std::size_t m = r.grid_a.m();
        emit("density_a" + extension(fmt), grid_text(r.grid_a, fmt));
        emit("density_b" + extension(fmt), grid_text(r.grid_b, fmt));
        emit("delta_rho" + extension(fmt), grid_text(r.difference.delta, fmt));
        ordered_json side{{"m", m},
                          {"rho_c", r.verdict.threshold},
                          {"units", cfg.jpd_units == sync::DeltaUnits::CellMass ? "cell-mass" : "density"},
                          {"eps", a.jpd->eps},
                          {"max_delta_rho_density", r.difference.max},
                          {"verdict", verdict_json(r.verdict)},
                          {"e_int", r.e_int},
                          {"layout", "row i: x in [i/m, (i+1)/m); column j: p in [j/m, (j+1)/m)"}};
        emit("jpd.json", json_text(side));
    }

    if (a.classical_sweep) {
        const auto& s = *a.classical_sweep;
        std::vector<double> values;
        for (const auto& pt : s.curve) values.insert(values.end(), {pt.eps, pt.e_int});
        emit("e_int_curve" + extension(fmt), table_text({"eps", "e_int"}, values, fmt));
        ordered_json probes = ordered_json::array();
        for (const auto& p : s.probes) {
            probes.push_back({{"eps", p.eps}, {"verdict", verdict_json(p.jpd.verdict)}, {"e_int", p.jpd.e_int}});
        }
        emit("classical_sweep.json",
             json_text({{"kink", s.kink ? ordered_json(*s.kink) : ordered_json(nullptr)},
                        {"kink_factor", cfg.kink_factor},
                        {"m", cfg.m},
                        {"probes", probes}}));
    }

    if (a.series) {
        const auto& s = *a.series;
        std::vector<std::string> columns{"n"};
        for (auto o : s.observables) columns.push_back(sweep::observable_name(o));
        std::vector<double> values;
        values.reserve(s.kicks.size() * columns.size());
        for (std::size_t r = 0; r < s.kicks.size(); ++r) {
            values.push_back(static_cast<double>(s.kicks[r]));
            for (std::size_t c = 0; c < s.observables.size(); ++c) values.push_back(s.values[r * s.observables.size() + c]);
        }
        emit("series" + extension(fmt), table_text(columns, values, fmt));
    }

    if (a.surface) {
        const auto& s = a.surface->surface;
        std::vector<std::string> columns{"n"};
        for (double e : s.eps_axis) columns.push_back("eps=" + format_shortest(e));
        ordered_json files = ordered_json::array();
        for (const auto& [obs, grid] : s.values) {
            std::vector<double> values;
            values.reserve(s.kick_axis.size() * columns.size());
            for (std::size_t r = 0; r < s.kick_axis.size(); ++r) {
                values.push_back(static_cast<double>(s.kick_axis[r]));
                for (std::size_t e = 0; e < s.eps_axis.size(); ++e) values.push_back(grid[r * s.eps_axis.size() + e]);
            }
            const std::string name = "surface_" + sweep::observable_name(obs) + extension(fmt);
            emit(name, table_text(columns, values, fmt));
            files.push_back(name);
        }
        ordered_json meta = quantum_meta_json(s.meta);
        meta["eps_axis"] = s.eps_axis;
        meta["kick_axis_first"] = s.kick_axis.empty() ? 0 : s.kick_axis.front();
        meta["kick_axis_last"] = s.kick_axis.empty() ? 0 : s.kick_axis.back();
        meta["kick_axis_count"] = s.kick_axis.size();
        meta["files"] = files;
        meta["interior_minimum_onset"] =
            a.surface->onset ? ordered_json(*a.surface->onset) : ordered_json(nullptr);
        emit("surface.json", json_text(meta));
    }

    if (a.mi) {
        const auto& m = *a.mi;
        emit("mi_map" + extension(fmt), matrix_text(m.map.values, m.map.n, m.map.n, fmt));
        std::size_t best = 0;
        for (std::size_t i = 1; i < m.map.values.size(); ++i)
            if (m.map.values[i] > m.map.values[best]) best = i;
        emit("mi_map.json", json_text({{"n", m.map.n},
                                       {"eps", m.eps},
                                       {"kicks", m.kicks},
                                       {"units", "nats"},
                                       {"layout", "row jB, column jA, both 1-based"},
                                       {"ja_axis", site_axis(m.map.n)},
                                       {"jb_axis", site_axis(m.map.n)},
                                       {"max", m.map.max()},
                                       {"argmax_jA", best % m.map.n + 1},
                                       {"argmax_jB", best / m.map.n + 1}}));
    }
    return written;
}

} // namespace harper::io
