#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "harper_sync/classical.hpp"
#include "harper_sync/coupled_quantum.hpp"
#include "harper_sync/measure_sync.hpp"
#include "harper_sync/sweep.hpp"

namespace harper::cli {

enum class Mode { Classical, Quantum };

/// Thrown by parse_config for --help; carries the usage text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
enum class OutputFormat { Csv, Json };

struct AxisSpec {
    double start = 0.0;
    double stop = 1.0;
    double step = 0.01;

    std::vector<double> values() const { return sweep::make_axis(start, stop, step); }
    friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

/// Fully resolved run description. Every field is validated on construction
/// through parse_config / resolve_config.
struct RunConfig {
    Mode mode = Mode::Classical;
    std::string command;  ///< trajectory|jpd|sweep (classical), evolve|sweep|mi-map (quantum)

    double tau = 0.0;  ///< required, no default
    double g = 1.0;
    double eps = 0.0;  ///< single-run coupling
    AxisSpec eps_axis;

    // classical
    std::array<double, 4> classical_ic{0.5, 0.4, 0.3, 0.5};
    std::size_t n_transient = 10'000;
    std::size_t n_total = 1'010'000;
    std::size_t m = 20;
    double rho_c = 1e-3;
    sync::DeltaUnits jpd_units = sync::DeltaUnits::CellMass;
    double kink_factor = 5.0;
    std::vector<double> probes{0.3, 0.7};
    bool coupling_new_positions = false;

    // quantum
    std::size_t n = 100;
    quantum::Coupling coupling = quantum::Coupling::Global;
    quantum::PropagatorForm propagator = quantum::PropagatorForm::Ring;
    std::size_t windings = 3;
    quantum::Propagation propagation = quantum::Propagation::Fft;
    std::array<std::size_t, 2> quantum_ic{1, 50};
    std::size_t kicks = 1000;
    std::vector<sweep::Observable> observables{sweep::Observable::DeltaE,
                                               sweep::Observable::NormalizedInteraction,
                                               sweep::Observable::Entropy};

    // run control
    double norm_tolerance = 1e-8;  ///< allowed |<psi|psi> - 1| before a quantum run aborts
    std::size_t record_every = 1;
    unsigned threads = 0;  ///< 0: HARPER_SYNC_THREADS or hardware concurrency
    std::string out = "out";
    OutputFormat format = OutputFormat::Csv;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

    classical::MapParams map_params() const;
    classical::TrajectoryLengths lengths() const;
    classical::PhaseState4 classical_state() const;
    sync::JpdOptions jpd_options() const;
    quantum::QuantumParams quantum_params() const;
    sweep::QuantumMeta quantum_meta() const;
    unsigned worker_count() const;
};

using KeyValues = std::map<std::string, std::string>;

/// Every recognised key, in echo order.
const std::vector<std::string>& known_keys();

/// Read a flat key=value file. Blank lines and lines starting with '#' are
/// skipped; keys are checked against known_keys().
KeyValues read_config_file(const std::string& path);
KeyValues parse_key_values(const std::string& text, const std::string& origin);

/// Build a validated config from explicit entries; everything absent takes
/// its documented default. Throws ConfigError naming the offending key.
RunConfig resolve_config(const KeyValues& entries);

/// Command line: [mode] command [--key value ...] [--config FILE].
/// Flags override config-file entries, which override defaults.
RunConfig parse_config(const std::vector<std::string>& args);

/// The resolved config as key=value lines (LF, fixed key order).
std::string format_config(const RunConfig& cfg);

std::string mode_name(Mode m);

} // namespace harper::cli
