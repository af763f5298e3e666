#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "harper_sync/app.hpp"
#include "harper_sync/config.hpp"
#include "harper_sync/errors.hpp"
#include "harper_sync/output.hpp"

using namespace harper;
using namespace harper::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("harper_sync_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string key_of_error(const std::vector<std::string>& args) {
    try {
        parse_config(args);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<none>";
}

std::string key_of_resolve_error(const KeyValues& kv) {
    try {
        resolve_config(kv);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "<none>";
}

} // namespace

TEST_SUITE("cli-io") {

TEST_CASE("classical defaults need an explicit tau") {
    CHECK(key_of_error({"classical", "jpd"}) == "tau");
    const auto c = parse_config({"classical", "jpd", "--tau", "0.3"});
    CHECK(c.mode == Mode::Classical);
    CHECK(c.g == 1.0);
    CHECK(c.m == 20);
    CHECK(c.rho_c == 1e-3);
    CHECK(c.classical_ic == std::array<double, 4>{0.5, 0.4, 0.3, 0.5});
    CHECK(c.n_transient == 10'000);
    CHECK(c.n_total == 1'010'000);
    CHECK(c.eps_axis == AxisSpec{0.0, 1.0, 0.01});
    CHECK(c.probes == std::vector<double>{0.3, 0.7});
    CHECK(parse_config({"classical", "jpd", "--tau", "0.1"}).rho_c == 4e-4);
}

TEST_CASE("documented scenario command lines") {
    const auto jpd = parse_config({"--tau", "0.3", "--eps", "0.7", "--mode", "classical", "jpd"});
    CHECK(jpd.command == "jpd");
    CHECK(jpd.tau == 0.3);
    CHECK(jpd.eps == 0.7);
    CHECK(jpd.rho_c == 1e-3);

    const auto local = parse_config({"--tau", "0.3", "--mode", "quantum", "--coupling", "local", "--ic", "1,20", "sweep"});
    CHECK(local.mode == Mode::Quantum);
    CHECK(local.coupling == quantum::Coupling::Local);
    CHECK(local.quantum_ic == std::array<std::size_t, 2>{1, 20});
    CHECK(local.n == 100);

    CHECK(parse_config({"quantum", "sweep", "--tau", "0.3"}).quantum_ic == std::array<std::size_t, 2>{1, 50});
    CHECK(parse_config({"quantum", "sweep", "--tau", "0.3", "--coupling", "local"}).quantum_ic ==
          std::array<std::size_t, 2>{1, 20});
    CHECK(parse_config({"quantum", "sweep", "--tau", "0.3"}).eps_axis == AxisSpec{0.01, 1.0, 0.01});
}

TEST_CASE("flags override the config file, which overrides defaults") {
    const auto dir = scratch_dir("precedence");
    fs::create_directories(dir);
    const auto file = dir / "run.cfg";
    io::write_file(file, "# scenario\nmode=classical\ncommand=jpd\ntau=0.5\neps=0.2\nm=10\n\n");
    const auto from_file = parse_config({"--config", file.string()});
    CHECK(from_file.tau == 0.5);
    CHECK(from_file.eps == 0.2);
    CHECK(from_file.m == 10);
    CHECK(from_file.g == 1.0);
    const auto overridden = parse_config({"--config", file.string(), "--eps", "0.9"});
    CHECK(overridden.eps == 0.9);
    CHECK(overridden.m == 10);
}

TEST_CASE("every invalid input names its key") {
    CHECK(key_of_error({"classical"}) == "command");
    CHECK(key_of_error({"classical", "evolve", "--tau", "0.3"}) == "command");
    CHECK(key_of_error({"quantum", "jpd", "--tau", "0.3"}) == "command");
    CHECK(key_of_error({"jpd", "--tau", "0.3"}) == "mode");
    CHECK(key_of_error({"classical", "jpd", "--tau", "abc"}) == "tau");
    CHECK(key_of_error({"classical", "jpd", "--tau", "-1"}) == "tau");
    CHECK(key_of_error({"classical", "jpd", "--tau", "0.3", "--eps", "nan"}) == "eps");
    CHECK(key_of_error({"classical", "jpd", "--tau", "0.3", "--m", "0"}) == "m");
    CHECK(key_of_error({"classical", "jpd", "--tau", "0.3", "--m", "2.5"}) == "m");
    CHECK(key_of_error({"classical", "jpd", "--tau", "0.3", "--rho-c", "0"}) == "rho-c");
    CHECK(key_of_error({"classical", "jpd", "--tau", "0.3", "--ic", "0.5,0.4,0.3"}) == "ic");
    CHECK(key_of_error({"classical", "jpd", "--tau", "0.3", "--ic", "0.5,0.4,0.3,1.0"}) == "ic");
    CHECK(key_of_error({"classical", "jpd", "--tau", "0.3", "--n-total", "10", "--n-transient", "10"}) == "n-total");
    CHECK(key_of_error({"classical", "sweep", "--tau", "0.3", "--eps-axis", "0:1"}) == "eps-axis");
    CHECK(key_of_error({"classical", "sweep", "--tau", "0.3", "--eps-axis", "1:0:0.1"}) == "eps-axis");
    CHECK(key_of_error({"classical", "sweep", "--tau", "0.3", "--probes", "0.3,x"}) == "probes");
    CHECK(key_of_error({"classical", "jpd", "--tau", "0.3", "--jpd-units", "kg"}) == "jpd-units");
    CHECK(key_of_error({"classical", "jpd", "--tau", "0.3", "--coupling-new-positions", "maybe"}) ==
          "coupling-new-positions");
    CHECK(key_of_error({"quantum", "sweep", "--tau", "0.3", "--n", "1"}) == "n");
    CHECK(key_of_error({"quantum", "sweep", "--tau", "0.3", "--ic", "0,5"}) == "ic");
    CHECK(key_of_error({"quantum", "sweep", "--tau", "0.3", "--ic", "1,101"}) == "ic");
    CHECK(key_of_error({"quantum", "sweep", "--tau", "0.3", "--kicks", "0"}) == "kicks");
    CHECK(key_of_error({"quantum", "sweep", "--tau", "0.3", "--coupling", "weird"}) == "coupling");
    CHECK(key_of_error({"quantum", "sweep", "--tau", "0.3", "--propagator", "exact"}) == "propagator");
    CHECK(key_of_error({"quantum", "sweep", "--tau", "0.3", "--observables", "entropy,spin"}) == "observables");
    CHECK(key_of_error({"quantum", "sweep", "--tau", "0.3", "--record-every", "0"}) == "record-every");
    CHECK(key_of_error({"quantum", "sweep", "--tau", "0.3", "--format", "xml"}) == "format");
    CHECK(key_of_error({"quantum", "sweep", "--tau", "0.3", "--threads", "-2"}) == "threads");
    CHECK(key_of_error({"quantum", "sweep", "--tau", "0.3", "--norm-tolerance", "0"}) == "norm-tolerance");
    CHECK(key_of_error({"quantum", "sweep", "--tau", "0.3", "--bogus", "1"}) == "arguments");
    CHECK(key_of_error({"quantum", "sweep", "extra", "--tau", "0.3"}) == "command");
    CHECK(key_of_error({"classical", "jpd", "--mode", "quantum", "--tau", "0.3"}) == "mode");
    CHECK(key_of_resolve_error(KeyValues{{"mode", "classical"}, {"command", "jpd"}, {"tau", "0.3"}, {"colour", "red"}}) ==
          "colour");
    CHECK(key_of_error({"classical", "jpd", "--config", "/nonexistent/harper.cfg"}) == "config");
}

TEST_CASE("unknown keys in a config file name the key") {
    try {
        parse_key_values("mode=classical\nspeed=3\n", "inline");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "speed");
    }
    CHECK_THROWS_AS(parse_key_values("tau 0.3\n", "inline"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("tau=0.3\ntau=0.5\n", "inline"), ConfigError);
}

TEST_CASE("echoed config round-trips exactly") {
    const std::vector<std::vector<std::string>> cases{
        {"classical", "jpd", "--tau", "0.3", "--eps", "0.7"},
        {"classical", "sweep", "--tau", "0.1", "--probes", "0.25,0.75,0.9", "--jpd-units", "density",
         "--eps-axis", "0.05:0.95:0.05", "--coupling-new-positions", "true", "--ic", "0.1,0.2,0.3,0.4"},
        {"quantum", "sweep", "--tau", "0.5", "--coupling", "local", "--propagator", "bessel", "--windings", "5",
         "--observables", "entropy,concurrence", "--threads", "2", "--format", "json", "--kicks", "321"},
        {"quantum", "mi-map", "--tau", "0.3", "--eps", "0.05", "--n", "37", "--g", "0.123456789012345678"},
    };
    for (const auto& args : cases) {
        const auto cfg = parse_config(args);
        const auto text = format_config(cfg);
        const auto again = resolve_config(parse_key_values(text, "echo"));
        CHECK(again == cfg);
        CHECK(format_config(again) == text);
    }
}

TEST_CASE("number formatting") {
    CHECK(io::format_number(0.1) == "0.10000000000000001");
    CHECK(io::format_number(1.0) == "1");
    CHECK(io::format_number(-2.5e-7) == "-2.4999999999999999e-07");
    CHECK(io::format_shortest(0.3) == "0.3");
    CHECK(io::format_shortest(1e-3) == "0.001");
}

TEST_CASE("empty artifact set writes only the config record") {
    auto cfg = parse_config({"classical", "jpd", "--tau", "0.3"});
    cfg.out = scratch_dir("empty").string();
    const auto files = io::write_outputs({}, cfg);
    REQUIRE(files.size() == 1);
    CHECK(files[0].filename() == "config.txt");
    CHECK(slurp(files[0]) == format_config(cfg));
}

TEST_CASE("density grid output schema") {
    auto cfg = parse_config({"classical", "jpd", "--tau", "0.3", "--eps", "0.7", "--n-total", "20000", "--n-transient",
                             "1000", "--m", "5"});
    cfg.out = scratch_dir("grid").string();
    const auto artifacts = app::execute(cfg);
    const auto files = io::write_outputs(artifacts, cfg);
    const auto csv = slurp(fs::path(cfg.out) / "density_a.csv");
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "5");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
    }
    CHECK(rows == 5);
    CHECK(csv.find('\r') == std::string::npos);
    const auto side = slurp(fs::path(cfg.out) / "jpd.json");
    CHECK(side.find("\"m\": 5") != std::string::npos);
    CHECK(side.find("\"synchronized\"") != std::string::npos);
    CHECK(side.find("\"rho_c\": 0.001") != std::string::npos);
}

TEST_CASE("quantum surface output schema and byte determinism") {
    auto cfg = parse_config({"quantum", "sweep", "--tau", "0.3", "--n", "12", "--ic", "1,6", "--kicks", "7",
                             "--eps-axis", "0.25:0.75:0.25", "--threads", "2"});
    cfg.out = scratch_dir("surface_a").string();
    io::write_outputs(app::execute(cfg), cfg);
    const auto first = slurp(fs::path(cfg.out) / "surface_entropy.csv");
    std::istringstream lines(first);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "n,eps=0.25,eps=0.5,eps=0.75");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 7);
    CHECK(fs::exists(fs::path(cfg.out) / "surface_delta_e.csv"));
    CHECK(fs::exists(fs::path(cfg.out) / "surface_e_int_norm.csv"));
    CHECK(fs::exists(fs::path(cfg.out) / "surface.json"));

    const std::string dir_a = cfg.out;
    cfg.out = scratch_dir("surface_b").string();
    cfg.threads = 1;
    io::write_outputs(app::execute(cfg), cfg);
    for (const char* name : {"surface_entropy.csv", "surface_delta_e.csv", "surface_e_int_norm.csv"}) {
        CHECK(slurp(fs::path(dir_a) / name) == slurp(fs::path(cfg.out) / name));
    }
}

TEST_CASE("classical byte determinism and json format") {
    auto cfg = parse_config({"classical", "sweep", "--tau", "0.3", "--n-total", "3000", "--n-transient", "100",
                             "--eps-axis", "0:1:0.1", "--format", "json"});
    cfg.out = scratch_dir("cjson_a").string();
    io::write_outputs(app::execute(cfg), cfg);
    const auto a = slurp(fs::path(cfg.out) / "e_int_curve.json");
    const auto sa = slurp(fs::path(cfg.out) / "classical_sweep.json");
    cfg.out = scratch_dir("cjson_b").string();
    io::write_outputs(app::execute(cfg), cfg);
    CHECK(a == slurp(fs::path(cfg.out) / "e_int_curve.json"));
    CHECK(sa == slurp(fs::path(cfg.out) / "classical_sweep.json"));
    CHECK(a.find("\"columns\": [\"eps\", \"e_int\"]") != std::string::npos);
}

TEST_CASE("mutual information map output") {
    auto cfg = parse_config({"quantum", "mi-map", "--tau", "0.3", "--eps", "0.5", "--n", "10", "--ic", "1,5",
                             "--kicks", "20"});
    cfg.out = scratch_dir("mi").string();
    const auto artifacts = app::execute(cfg);
    io::write_outputs(artifacts, cfg);
    std::istringstream lines(slurp(fs::path(cfg.out) / "mi_map.csv"));
    int rows = 0;
    for (std::string line; std::getline(lines, line);) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 9);
    }
    CHECK(rows == 10);
    const auto side = slurp(fs::path(cfg.out) / "mi_map.json");
    CHECK(side.find("\"units\": \"nats\"") != std::string::npos);
    CHECK(side.find("\"ja_axis\"") != std::string::npos);
}

TEST_CASE("evolve series and trajectory outputs") {
    auto q = parse_config({"quantum", "evolve", "--tau", "0.3", "--eps", "0.4", "--n", "10", "--ic", "1,5", "--kicks",
                           "9", "--record-every", "4", "--observables", "e_a,e_b,concurrence"});
    q.out = scratch_dir("series").string();
    io::write_outputs(app::execute(q), q);
    const auto series = slurp(fs::path(q.out) / "series.csv");
    CHECK(series.rfind("n,e_a,e_b,concurrence\n4,", 0) == 0);
    CHECK(series.find("\n8,") != std::string::npos);
    CHECK(series.find("\n9,") != std::string::npos);

    auto c = parse_config({"classical", "trajectory", "--tau", "0.3", "--eps", "0.3", "--n-transient", "0",
                           "--n-total", "2"});
    c.out = scratch_dir("trajectory").string();
    io::write_outputs(app::execute(c), c);
    const auto traj = slurp(fs::path(c.out) / "trajectory.csv");
    CHECK(traj.rfind("n,xA,pA,xB,pB\n1,0.32366442431225806,", 0) == 0);
}

TEST_CASE("exit codes") {
    std::ostringstream out, err;
    CHECK(app::run({"classical", "jpd"}, out, err) == app::kExitConfig);
    CHECK(err.str().find("tau") != std::string::npos);
    CHECK(app::run({"--help"}, out, err) == app::kExitOk);
    CHECK(out.str().find("--tau") != std::string::npos);

    const auto dir = scratch_dir("numeric");
    CHECK(app::run({"quantum", "evolve", "--tau", "2.9", "--eps", "0.4", "--n", "16", "--ic", "1,8", "--kicks", "50",
                    "--norm-tolerance", "1e-300", "--out", dir.string()},
                   out, err) == app::kExitNumeric);
    CHECK(err.str().find("norm drift") != std::string::npos);

    const auto ok = scratch_dir("ok");
    CHECK(app::run({"quantum", "evolve", "--tau", "0.3", "--n", "8", "--ic", "1,4", "--kicks", "3", "--out",
                    ok.string()},
                   out, err) == app::kExitOk);
    CHECK(fs::exists(ok / "config.txt"));
}

} // TEST_SUITE
