#include "harper_sync/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "harper_sync/errors.hpp"
#include "harper_sync/output.hpp"
#include "harper_sync/parallel.hpp"

namespace harper::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double parse_real(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError(key, "expected a real number, got '" + text + "'");
    }
    if (!std::isfinite(v)) throw ConfigError(key, "value must be finite");
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(key, "expected true or false, got '" + text + "'");
}

template <class E>
E parse_choice(const std::string& key, const std::string& text, const std::vector<std::pair<std::string, E>>& table) {
    const std::string s = trim(text);
    std::string allowed;
    for (const auto& [name, value] : table) {
        if (name == s) return value;
        allowed += (allowed.empty() ? "" : "|") + name;
    }
    throw ConfigError(key, "expected one of " + allowed + ", got '" + text + "'");
}

template <class E>
std::string choice_name(E value, const std::vector<std::pair<std::string, E>>& table) {
    for (const auto& [name, v] : table)
        if (v == value) return name;
    throw std::logic_error("unnamed enumerator");
}

const std::vector<std::pair<std::string, Mode>> kModes{{"classical", Mode::Classical}, {"quantum", Mode::Quantum}};
const std::vector<std::pair<std::string, OutputFormat>> kFormats{{"csv", OutputFormat::Csv},
                                                                 {"json", OutputFormat::Json}};
const std::vector<std::pair<std::string, sync::DeltaUnits>> kUnits{{"cell-mass", sync::DeltaUnits::CellMass},
                                                                   {"density", sync::DeltaUnits::Density}};
const std::vector<std::pair<std::string, quantum::Coupling>> kCouplings{{"global", quantum::Coupling::Global},
                                                                        {"local", quantum::Coupling::Local}};
const std::vector<std::pair<std::string, quantum::PropagatorForm>> kForms{
    {"ring", quantum::PropagatorForm::Ring}, {"bessel", quantum::PropagatorForm::Bessel}};
const std::vector<std::pair<std::string, quantum::Propagation>> kPropagations{
    {"fft", quantum::Propagation::Fft}, {"dense", quantum::Propagation::Dense}};

const std::vector<std::string> kClassicalCommands{"trajectory", "jpd", "sweep"};
const std::vector<std::string> kQuantumCommands{"evolve", "sweep", "mi-map"};

AxisSpec parse_axis(const std::string& key, const std::string& text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError(key, "expected start:stop:step, got '" + text + "'");
    AxisSpec a{parse_real(key, parts[0]), parse_real(key, parts[1]), parse_real(key, parts[2])};
    if (!(a.step > 0.0)) throw ConfigError(key, "step must be > 0");
    if (a.stop < a.start) throw ConfigError(key, "stop must be >= start");
    if ((a.stop - a.start) / a.step > 1e6) throw ConfigError(key, "more than 10^6 axis points");
    return a;
}

std::string join_reals(const std::vector<double>& v, char sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) s += sep;
        s += io::format_shortest(v[i]);
    }
    return s;
}

/// Looks up explicit entries first, then the supplied default.
class Entries {
public:
    explicit Entries(const KeyValues& kv) : kv_(kv) {}
    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback) const {
        const auto it = kv_.find(key);
        return it == kv_.end() ? fallback : it->second;
    }

private:
    const KeyValues& kv_;
};

} // namespace

std::string mode_name(Mode m) { return choice_name(m, kModes); }

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "mode",       "command",  "tau",         "g",           "eps",          "eps-axis",
        "ic",         "n-transient", "n-total",  "m",           "rho-c",        "jpd-units",
        "kink-factor", "probes",  "coupling-new-positions",     "n",            "coupling",
        "propagator", "windings", "propagation", "kicks",       "observables",  "norm-tolerance", "record-every",
        "threads",    "out",      "format",
    };
    return keys;
}

classical::MapParams RunConfig::map_params() const {
    return classical::MapParams{tau, g, eps, coupling_new_positions};
}

classical::TrajectoryLengths RunConfig::lengths() const { return {n_transient, n_total}; }

classical::PhaseState4 RunConfig::classical_state() const {
    return {classical_ic[0], classical_ic[1], classical_ic[2], classical_ic[3]};
}

sync::JpdOptions RunConfig::jpd_options() const { return {m, rho_c, jpd_units}; }

quantum::QuantumParams RunConfig::quantum_params() const {
    return quantum::QuantumParams{n, tau, g, eps, coupling, propagator, windings};
}

sweep::QuantumMeta RunConfig::quantum_meta() const {
    return sweep::QuantumMeta{quantum_params(), quantum_ic[0], quantum_ic[1], propagation};
}

unsigned RunConfig::worker_count() const { return threads > 0 ? threads : default_thread_count(); }

KeyValues parse_key_values(const std::string& text, const std::string& origin) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    const auto& keys = known_keys();
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no), "expected key=value, got '" + t + "'");
        }
        const std::string key = trim(t.substr(0, eq));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(key, "unknown key");
        if (kv.count(key) > 0) throw ConfigError(key, "given more than once in " + origin);
        kv[key] = trim(t.substr(eq + 1));
    }
    return kv;
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str(), path);
}

RunConfig resolve_config(const KeyValues& kv) {
    const auto& keys = known_keys();
    for (const auto& [key, value] : kv)
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(key, "unknown key");

    const Entries e(kv);
    RunConfig c;

    if (!e.has("mode")) throw ConfigError("mode", "required (classical or quantum)");
    c.mode = parse_choice("mode", e.get("mode", ""), kModes);
    const bool classical_mode = c.mode == Mode::Classical;

    if (!e.has("command")) throw ConfigError("command", "required");
    c.command = trim(e.get("command", ""));
    const auto& commands = classical_mode ? kClassicalCommands : kQuantumCommands;
    if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) {
        std::string allowed;
        for (const auto& name : commands) allowed += (allowed.empty() ? "" : "|") + name;
        throw ConfigError("command", "'" + c.command + "' is not a " + mode_name(c.mode) + " command (" +
                                         allowed + ")");
    }

    if (!e.has("tau")) throw ConfigError("tau", "required; no default (typical values 0.1, 0.3, 0.5)");
    c.tau = parse_real("tau", e.get("tau", ""));
    if (!(c.tau > 0.0)) throw ConfigError("tau", "must be > 0");
    c.g = parse_real("g", e.get("g", "1"));
    c.eps = parse_real("eps", e.get("eps", "0"));
    c.eps_axis = parse_axis("eps-axis", e.get("eps-axis", classical_mode ? "0:1:0.01" : "0.01:1:0.01"));

    c.n_transient = parse_count("n-transient", e.get("n-transient", "10000"));
    c.n_total = parse_count("n-total", e.get("n-total", "1010000"));
    if (c.n_total <= c.n_transient) throw ConfigError("n-total", "must exceed n-transient");
    c.m = parse_count("m", e.get("m", "20"));
    if (c.m < 1 || c.m > 100'000) throw ConfigError("m", "must be in [1, 100000]");
    c.rho_c = parse_real("rho-c", e.get("rho-c", c.tau == 0.1 ? "4e-4" : "1e-3"));
    if (!(c.rho_c > 0.0)) throw ConfigError("rho-c", "must be > 0");
    c.jpd_units = parse_choice("jpd-units", e.get("jpd-units", "cell-mass"), kUnits);
    c.kink_factor = parse_real("kink-factor", e.get("kink-factor", "5"));
    if (!(c.kink_factor > 0.0)) throw ConfigError("kink-factor", "must be > 0");
    c.probes.clear();
    const std::string probes = trim(e.get("probes", "0.3,0.7"));
    if (!probes.empty())
        for (const auto& item : split(probes, ',')) c.probes.push_back(parse_real("probes", item));
    c.coupling_new_positions = parse_bool("coupling-new-positions", e.get("coupling-new-positions", "false"));

    c.n = parse_count("n", e.get("n", "100"));
    if (c.n < 2 || c.n > 4096) throw ConfigError("n", "must be in [2, 4096]");
    c.coupling = parse_choice("coupling", e.get("coupling", "global"), kCouplings);
    c.propagator = parse_choice("propagator", e.get("propagator", "ring"), kForms);
    c.windings = parse_count("windings", e.get("windings", "3"));
    if (c.windings > 64) throw ConfigError("windings", "must be <= 64");
    c.propagation = parse_choice("propagation", e.get("propagation", "fft"), kPropagations);
    c.kicks = parse_count("kicks", e.get("kicks", "1000"));
    if (c.kicks < 1) throw ConfigError("kicks", "must be >= 1");
    c.observables.clear();
    for (const auto& name : split(e.get("observables", "delta_e,e_int_norm,entropy"), ',')) {
        try {
            c.observables.push_back(sweep::parse_observable(name));
        } catch (const std::invalid_argument& ex) {
            throw ConfigError("observables", ex.what());
        }
    }
    if (c.observables.empty()) throw ConfigError("observables", "at least one observable is required");

    const std::string ic_default =
        classical_mode ? "0.5,0.4,0.3,0.5"
                       : "1," + std::to_string(std::max<std::size_t>(
                                    1, c.coupling == quantum::Coupling::Global ? c.n / 2 : c.n / 5));
    const auto ic = split(e.get("ic", ic_default), ',');
    if (classical_mode) {
        if (ic.size() != 4) throw ConfigError("ic", "classical mode expects four reals xA,pA,xB,pB");
        for (std::size_t i = 0; i < 4; ++i) {
            c.classical_ic[i] = parse_real("ic", ic[i]);
            if (c.classical_ic[i] < 0.0 || c.classical_ic[i] >= 1.0) {
                throw ConfigError("ic", "coordinates must lie in [0, 1)");
            }
        }
    } else {
        if (ic.size() != 2) throw ConfigError("ic", "quantum mode expects two sites x0,y0");
        for (std::size_t i = 0; i < 2; ++i) {
            c.quantum_ic[i] = parse_count("ic", ic[i]);
            if (c.quantum_ic[i] < 1 || c.quantum_ic[i] > c.n) {
                throw ConfigError("ic", "sites must lie in [1, n]");
            }
        }
    }

    c.norm_tolerance = parse_real("norm-tolerance", e.get("norm-tolerance", "1e-8"));
    if (!(c.norm_tolerance > 0.0)) throw ConfigError("norm-tolerance", "must be > 0");
    c.record_every = parse_count("record-every", e.get("record-every", "1"));
    if (c.record_every < 1) throw ConfigError("record-every", "must be >= 1");
    const std::size_t threads = parse_count("threads", e.get("threads", "0"));
    if (threads > 4096) throw ConfigError("threads", "must be <= 4096");
    c.threads = static_cast<unsigned>(threads);
    c.out = trim(e.get("out", "out"));
    if (c.out.empty()) throw ConfigError("out", "must not be empty");
    c.format = parse_choice("format", e.get("format", "csv"), kFormats);
    return c;
}

RunConfig parse_config(const std::vector<std::string>& args) {
    CLI::App app{"Coupled kicked-Harper simulations", "harper_sync"};
    std::vector<std::string> positionals;
    std::string config_path;
    std::map<std::string, std::string> flags;

    app.add_option("mode/command", positionals, "[classical|quantum] command");
    app.add_option("--config", config_path, "flat key=value file (flags override its entries)");
    for (const auto& key : known_keys()) app.add_option("--" + key, flags[key]);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& ex) {
        throw ConfigError("arguments", ex.what());
    }

    KeyValues kv = config_path.empty() ? KeyValues{} : read_config_file(config_path);
    for (const auto& key : known_keys())
        if (app.get_option("--" + key)->count() > 0) kv[key] = flags[key];

    auto set_positional = [&](const std::string& key, const std::string& value) {
        if (app.get_option("--" + key)->count() > 0 && flags[key] != value) {
            throw ConfigError(key, "given both as argument '" + value + "' and as --" + key);
        }
        kv[key] = value;
    };
    std::size_t next = 0;
    if (next < positionals.size() && (positionals[next] == "classical" || positionals[next] == "quantum")) {
        set_positional("mode", positionals[next++]);
    }
    if (next < positionals.size()) set_positional("command", positionals[next++]);
    if (next < positionals.size()) throw ConfigError("command", "unexpected argument '" + positionals[next] + "'");

    return resolve_config(kv);
}

std::string format_config(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> kv;
    auto put = [&](const std::string& key, std::string value) { kv.emplace_back(key, std::move(value)); };
    auto real = [](double v) { return io::format_shortest(v); };

    put("mode", mode_name(c.mode));
    put("command", c.command);
    put("tau", real(c.tau));
    put("g", real(c.g));
    put("eps", real(c.eps));
    put("eps-axis", real(c.eps_axis.start) + ":" + real(c.eps_axis.stop) + ":" + real(c.eps_axis.step));
    if (c.mode == Mode::Classical) {
        put("ic", join_reals({c.classical_ic.begin(), c.classical_ic.end()}, ','));
    } else {
        put("ic", std::to_string(c.quantum_ic[0]) + "," + std::to_string(c.quantum_ic[1]));
    }
    put("n-transient", std::to_string(c.n_transient));
    put("n-total", std::to_string(c.n_total));
    put("m", std::to_string(c.m));
    put("rho-c", real(c.rho_c));
    put("jpd-units", choice_name(c.jpd_units, kUnits));
    put("kink-factor", real(c.kink_factor));
    put("probes", join_reals(c.probes, ','));
    put("coupling-new-positions", c.coupling_new_positions ? "true" : "false");
    put("n", std::to_string(c.n));
    put("coupling", choice_name(c.coupling, kCouplings));
    put("propagator", choice_name(c.propagator, kForms));
    put("windings", std::to_string(c.windings));
    put("propagation", choice_name(c.propagation, kPropagations));
    put("kicks", std::to_string(c.kicks));
    std::string obs;
    for (auto o : c.observables) obs += (obs.empty() ? "" : ",") + sweep::observable_name(o);
    put("observables", obs);
    put("norm-tolerance", real(c.norm_tolerance));
    put("record-every", std::to_string(c.record_every));
    put("threads", std::to_string(c.threads));
    put("out", c.out);
    put("format", choice_name(c.format, kFormats));

    std::string text;
    for (const auto& [key, value] : kv) text += key + "=" + value + "\n";
    return text;
}

} // namespace harper::cli
