#include "harper_sync/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "harper_sync/errors.hpp"
#include "harper_sync/observables.hpp"
#include "harper_sync/parallel.hpp"

namespace harper {

unsigned default_thread_count() {
    if (const char* env = std::getenv("HARPER_SYNC_THREADS"); env != nullptr && *env != '\0') {
        unsigned v = 0;
        const char* end = env + std::strlen(env);
        const auto [ptr, ec] = std::from_chars(env, end, v);
        if (ec == std::errc{} && ptr == end && v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace harper

namespace harper::sweep {

namespace {

const std::map<Observable, std::string>& names() {
    static const std::map<Observable, std::string> table{
        {Observable::EnergyA, "e_a"},
        {Observable::EnergyB, "e_b"},
        {Observable::DeltaE, "delta_e"},
        {Observable::InteractionEnergy, "e_int"},
        {Observable::NormalizedInteraction, "e_int_norm"},
        {Observable::Entropy, "entropy"},
        {Observable::LinearEntropy, "linear_entropy"},
        {Observable::Concurrence, "concurrence"},
    };
    return table;
}

} // namespace

std::string observable_name(Observable o) { return names().at(o); }

Observable parse_observable(const std::string& name) {
    for (const auto& [o, n] : names())
        if (n == name) return o;
    throw std::invalid_argument("unknown observable '" + name + "'");
}

std::vector<double> SweepSurface::row(Observable o, std::size_t kick_index) const {
    const auto& v = values.at(o);
    const auto begin = v.begin() + static_cast<std::ptrdiff_t>(kick_index * eps_axis.size());
    return {begin, begin + static_cast<std::ptrdiff_t>(eps_axis.size())};
}

double evaluate(Observable o, const quantum::JointAmplitude& state, double eps, quantum::Coupling mode) {
    using observables::Subsystem;
    switch (o) {
    case Observable::EnergyA: return observables::hopping_energy(state, Subsystem::A);
    case Observable::EnergyB: return observables::hopping_energy(state, Subsystem::B);
    case Observable::DeltaE:
        return observables::hopping_energy(state, Subsystem::A) - observables::hopping_energy(state, Subsystem::B);
    case Observable::InteractionEnergy: return observables::coupling_energy(state, eps, mode);
    case Observable::NormalizedInteraction: {
        const double e = observables::coupling_energy(state, eps, mode);
        if (eps == 0.0) return e;
        return mode == quantum::Coupling::Global ? e / (2.0 * eps) : e / eps;
    }
    case Observable::Entropy:
        return observables::von_neumann_entropy(observables::reduced_density(state, Subsystem::A));
    case Observable::LinearEntropy:
        return observables::linear_entropy(observables::reduced_density(state, Subsystem::A));
    case Observable::Concurrence:
        return observables::concurrence_between_systems(observables::reduced_density(state, Subsystem::A));
    }
    throw std::logic_error("unhandled observable");
}

SweepSurface run_quantum_sweep(const QuantumSweepSpec& spec) {
    if (spec.eps_axis.empty()) throw std::invalid_argument("eps axis is empty");
    for (std::size_t i = 1; i < spec.eps_axis.size(); ++i)
        if (!(spec.eps_axis[i] > spec.eps_axis[i - 1])) throw std::invalid_argument("eps axis must increase");
    if (spec.kicks < 1) throw std::invalid_argument("kicks must be >= 1");
    if (spec.record_every < 1) throw std::invalid_argument("record_every must be >= 1");
    if (spec.observables.empty()) throw std::invalid_argument("no observables requested");
    spec.meta.base.validate();

    SweepSurface out;
    out.eps_axis = spec.eps_axis;
    out.meta = spec.meta;
    for (std::size_t k = 1; k <= spec.kicks; ++k)
        if (k % spec.record_every == 0 || k == spec.kicks) out.kick_axis.push_back(k);

    const std::size_t rows = out.kick_axis.size();
    const std::size_t n_obs = spec.observables.size();

    // Each job returns its eps column: rows x observables.
    auto columns = parallel_map<std::vector<double>>(spec.eps_axis.size(), spec.threads, [&](std::size_t i) {
        quantum::QuantumParams p = spec.meta.base;
        p.eps = spec.eps_axis[i];
        std::vector<double> col;
        col.reserve(rows * n_obs);
        const auto state0 = quantum::initial_delta_state(p.n, spec.meta.x0, spec.meta.y0);
        std::size_t next_row = 0;
        quantum::evolve(state0, p, spec.kicks, [&](std::size_t kick, const quantum::JointAmplitude& psi) {
            if (next_row >= rows || out.kick_axis[next_row] != kick) return;
            ++next_row;
            const double drift = std::abs(psi.norm_squared() - 1.0);
            if (drift > spec.norm_tolerance) {
                throw NumericError("norm drift " + std::to_string(drift) + " at kick " + std::to_string(kick) +
                                   ", eps " + std::to_string(p.eps));
            }
            for (auto o : spec.observables) col.push_back(evaluate(o, psi, p.eps, p.coupling));
        }, spec.meta.propagation);
        return col;
    });

    const std::size_t width = spec.eps_axis.size();
    for (std::size_t oi = 0; oi < n_obs; ++oi) {
        std::vector<double> grid(rows * width);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t e = 0; e < width; ++e) grid[r * width + e] = columns[e][r * n_obs + oi];
        out.values[spec.observables[oi]] = std::move(grid);
    }
    return out;
}

std::size_t argmin(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("argmin of an empty sequence");
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[best]) best = i;
    return best;
}

std::size_t argmax(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("argmax of an empty sequence");
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

std::optional<std::size_t> interior_minimum_onset(const SweepSurface& s, double guard) {
    if (s.eps_axis.size() < 3) return std::nullopt;
    for (std::size_t r = 0; r < s.kick_axis.size(); ++r) {
        const auto row = s.row(Observable::NormalizedInteraction, r);
        const std::size_t i = argmin(row);
        if (i == 0 || i + 1 == row.size()) continue;
        if (row[i] < row.front() - guard && row[i] < row.back() - guard) return s.kick_axis[r];
    }
    return std::nullopt;
}

ClassicalSweepResult run_classical_sweep(const ClassicalSweepSpec& spec) {
    ClassicalSweepResult out;
    out.curve = sync::interaction_energy_curve(spec.s0, spec.base, spec.eps_axis, spec.lengths, spec.threads);
    if (out.curve.size() >= 5) out.kink = sync::detect_kink(out.curve, spec.kink);
    out.probes = parallel_map<ProbeResult>(spec.probes.size(), spec.threads, [&](std::size_t i) {
        classical::MapParams p = spec.base;
        p.eps = spec.probes[i];
        return ProbeResult{p.eps, sync::analyze_run(spec.s0, p, spec.lengths, spec.jpd)};
    });
    return out;
}

std::vector<double> make_axis(double start, double stop, double step) {
    if (!std::isfinite(start) || !std::isfinite(stop) || !(step > 0.0) || stop < start) {
        throw std::invalid_argument("axis needs finite start <= stop and step > 0");
    }
    std::vector<double> axis;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        const double v = start + static_cast<double>(i) * step;
        axis.push_back(std::round(v * 1e12) / 1e12);
    }
    return axis;
}

} // namespace harper::sweep
