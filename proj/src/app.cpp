#include "harper_sync/app.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "harper_sync/errors.hpp"

namespace harper::app {

namespace {

io::TrajectoryArtifact classical_trajectory(const cli::RunConfig& cfg) {
    io::TrajectoryArtifact t;
    const auto lengths = cfg.lengths();
    t.first_step = lengths.n_transient + 1;
    t.stride = cfg.record_every;
    double sum = 0.0;
    const double eps = cfg.eps;
    classical::iterate(cfg.classical_state(), cfg.map_params(), lengths,
                       [&](std::size_t step, const classical::PhaseState4& s) {
                           sum += classical::step_interaction_energy(s, eps);
                           if ((step - t.first_step) % t.stride == 0) t.states.push_back(s);
                       });
    t.e_int = sum / static_cast<double>(lengths.recorded());
    return t;
}

io::SeriesArtifact quantum_series(const cli::RunConfig& cfg) {
    const auto p = cfg.quantum_params();
    p.validate();
    io::SeriesArtifact s;
    s.eps = p.eps;
    s.observables = cfg.observables;
    const auto psi0 = quantum::initial_delta_state(p.n, cfg.quantum_ic[0], cfg.quantum_ic[1]);
    quantum::evolve(psi0, p, cfg.kicks, [&](std::size_t kick, const quantum::JointAmplitude& psi) {
        if (kick % cfg.record_every != 0 && kick != cfg.kicks) return;
        const double drift = std::abs(psi.norm_squared() - 1.0);
        if (drift > cfg.norm_tolerance) {
            throw NumericError("norm drift " + io::format_number(drift) + " at kick " + std::to_string(kick));
        }
        s.kicks.push_back(kick);
        for (auto o : s.observables) s.values.push_back(sweep::evaluate(o, psi, p.eps, p.coupling));
    }, cfg.propagation);
    return s;
}

io::MiArtifact quantum_mi(const cli::RunConfig& cfg) {
    const auto p = cfg.quantum_params();
    p.validate();
    const auto psi0 = quantum::initial_delta_state(p.n, cfg.quantum_ic[0], cfg.quantum_ic[1]);
    const auto psi = quantum::evolve(psi0, p, cfg.kicks, {}, cfg.propagation);
    const double drift = std::abs(psi.norm_squared() - 1.0);
    if (drift > cfg.norm_tolerance) throw NumericError("norm drift " + io::format_number(drift) + " after final kick");
    return {p.eps, cfg.kicks, observables::mutual_information_map(psi)};
}

} // namespace

io::Artifacts execute(const cli::RunConfig& cfg) {
    io::Artifacts a;
    if (cfg.mode == cli::Mode::Classical) {
        if (cfg.command == "trajectory") {
            a.trajectory = classical_trajectory(cfg);
        } else if (cfg.command == "jpd") {
            a.jpd = io::JpdArtifact{cfg.eps, sync::analyze_run(cfg.classical_state(), cfg.map_params(), cfg.lengths(),
                                                               cfg.jpd_options())};
        } else {
            sweep::ClassicalSweepSpec spec;
            spec.s0 = cfg.classical_state();
            spec.base = cfg.map_params();
            spec.eps_axis = cfg.eps_axis.values();
            spec.lengths = cfg.lengths();
            spec.probes = cfg.probes;
            spec.jpd = cfg.jpd_options();
            spec.kink = sync::KinkOptions{cfg.kink_factor};
            spec.threads = cfg.worker_count();
            a.classical_sweep = sweep::run_classical_sweep(spec);
        }
        return a;
    }

    if (cfg.command == "evolve") {
        a.series = quantum_series(cfg);
    } else if (cfg.command == "sweep") {
        sweep::QuantumSweepSpec spec;
        spec.meta = cfg.quantum_meta();
        spec.eps_axis = cfg.eps_axis.values();
        spec.kicks = cfg.kicks;
        spec.observables = cfg.observables;
        spec.record_every = cfg.record_every;
        spec.norm_tolerance = cfg.norm_tolerance;
        spec.threads = cfg.worker_count();
        io::SurfaceArtifact s{sweep::run_quantum_sweep(spec), std::nullopt};
        if (s.surface.values.count(sweep::Observable::NormalizedInteraction) > 0) {
            s.onset = sweep::interior_minimum_onset(s.surface);
        }
        a.surface = std::move(s);
    } else {
        a.mi = quantum_mi(cfg);
    }
    return a;
}

std::string summarize(const io::Artifacts& a) {
    std::ostringstream s;
    if (a.trajectory) s << "trajectory: " << a.trajectory->states.size() << " states, <E_int> = "
                        << io::format_number(a.trajectory->e_int) << "\n";
    if (a.jpd) {
        const auto& v = a.jpd->result.verdict;
        s << "jpd: eps=" << io::format_shortest(a.jpd->eps) << " max_delta_rho=" << io::format_number(v.max_delta_rho)
          << " rho_c=" << io::format_shortest(v.threshold) << " -> "
          << (v.synchronized ? "synchronized" : "desynchronized") << "\n";
    }
    if (a.classical_sweep) {
        const auto& c = *a.classical_sweep;
        s << "classical sweep: " << c.curve.size() << " points, kink "
          << (c.kink ? "at eps=" + io::format_shortest(*c.kink) : std::string("not detected")) << "\n";
        for (const auto& p : c.probes) {
            s << "  probe eps=" << io::format_shortest(p.eps) << " max_delta_rho="
              << io::format_number(p.jpd.verdict.max_delta_rho) << " -> "
              << (p.jpd.verdict.synchronized ? "synchronized" : "desynchronized") << "\n";
        }
    }
    if (a.series) s << "evolve: " << a.series->kicks.size() << " recorded kicks\n";
    if (a.surface) {
        s << "quantum sweep: " << a.surface->surface.eps_axis.size() << " eps x "
          << a.surface->surface.kick_axis.size() << " kicks, interior-minimum onset "
          << (a.surface->onset ? "at n=" + std::to_string(*a.surface->onset) : std::string("not reached")) << "\n";
    }
    if (a.mi) s << "mi-map: max I = " << io::format_number(a.mi->map.max()) << " nats\n";
    return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const auto cfg = cli::parse_config(args);
        const auto artifacts = execute(cfg);
        const auto files = io::write_outputs(artifacts, cfg);
        out << summarize(artifacts);
        out << "wrote " << files.size() << " file(s) to " << cfg.out << "\n";
        return kExitOk;
    } catch (const cli::HelpRequested& h) {
        out << h.what();
        return kExitOk;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace harper::app
