#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "harper_sync/classical.hpp"
#include "harper_sync/coupled_quantum.hpp"
#include "harper_sync/measure_sync.hpp"

namespace harper::sweep {

enum class Observable {
    EnergyA,
    EnergyB,
    DeltaE,            ///< E^A - E^B
    InteractionEnergy, ///< E^int
    NormalizedInteraction, ///< E^int / 2 eps (global) or E^int / eps (local); raw at eps = 0
    Entropy,           ///< S^A
    LinearEntropy,
    Concurrence,
};

std::string observable_name(Observable o);
/// Inverse of observable_name; throws std::invalid_argument on unknown names.
Observable parse_observable(const std::string& name);

/// Everything needed to reproduce a quantum surface.
struct QuantumMeta {
    quantum::QuantumParams base;  ///< eps unused
    std::size_t x0 = 1;
    std::size_t y0 = 50;
    quantum::Propagation propagation = quantum::Propagation::Fft;
};

/// Observable values on a (kick, eps) lattice. Each observable is stored
/// row-major: values.at(o)[kick_index * eps_axis.size() + eps_index].
struct SweepSurface {
    std::vector<double> eps_axis;
    std::vector<std::size_t> kick_axis;
    std::map<Observable, std::vector<double>> values;
    QuantumMeta meta;

    double at(Observable o, std::size_t kick_index, std::size_t eps_index) const {
        return values.at(o)[kick_index * eps_axis.size() + eps_index];
    }
    /// Values of `o` across the eps axis at one kick.
    std::vector<double> row(Observable o, std::size_t kick_index) const;
};

struct QuantumSweepSpec {
    QuantumMeta meta;
    std::vector<double> eps_axis;
    std::size_t kicks = 1000;
    std::vector<Observable> observables{Observable::DeltaE, Observable::NormalizedInteraction,
                                        Observable::Entropy};
    std::size_t record_every = 1;  ///< the final kick is always recorded
    double norm_tolerance = 1e-8;  ///< |<psi|psi> - 1| allowed before aborting
    unsigned threads = 1;
};

/// One independent evolution per eps; rows are assembled by eps index.
/// Throws NumericError when the norm drifts past `norm_tolerance`.
SweepSurface run_quantum_sweep(const QuantumSweepSpec& spec);

/// Value of one observable on a single state.
double evaluate(Observable o, const quantum::JointAmplitude& state, double eps, quantum::Coupling mode);

/// Index of the smallest (largest) value, ties toward the smaller index.
std::size_t argmin(const std::vector<double>& v);
std::size_t argmax(const std::vector<double>& v);

/// First recorded kick at which the normalised interaction energy, as a
/// function of eps, has its minimum strictly inside the axis and more than
/// `guard` below both endpoint values.
std::optional<std::size_t> interior_minimum_onset(const SweepSurface& s, double guard = 1e-12);

struct ProbeResult {
    double eps = 0.0;
    sync::JpdResult jpd;
};

struct ClassicalSweepSpec {
    classical::PhaseState4 s0{0.5, 0.4, 0.3, 0.5};
    classical::MapParams base;
    std::vector<double> eps_axis;
    classical::TrajectoryLengths lengths;
    std::vector<double> probes{0.3, 0.7};
    sync::JpdOptions jpd;
    sync::KinkOptions kink;
    unsigned threads = 1;
};

struct ClassicalSweepResult {
    std::vector<sync::CurvePoint> curve;
    std::optional<double> kink;
    std::vector<ProbeResult> probes;
};

ClassicalSweepResult run_classical_sweep(const ClassicalSweepSpec& spec);

/// start, start + step, ... up to stop (inclusive within half a step), each
/// value rounded to 12 decimals so grids like 0.01:1:0.01 hit exact labels.
std::vector<double> make_axis(double start, double stop, double step);

} // namespace harper::sweep
