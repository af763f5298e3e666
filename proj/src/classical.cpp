#include "harper_sync/classical.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace harper::classical {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void validate(const PhaseState4& s0, const TrajectoryLengths& lengths) {
    if (!(std::isfinite(s0.xA) && std::isfinite(s0.pA) && std::isfinite(s0.xB) &&
          std::isfinite(s0.pB))) {
        throw std::invalid_argument("initial state has non-finite coordinates");
    }
    if (lengths.n_total <= lengths.n_transient) {
        throw std::invalid_argument("n_total must exceed n_transient");
    }
}

} // namespace

double wrap_unit(double v) {
    double r = v - std::floor(v);
    // v slightly below an integer can round up to exactly 1.0
    if (r >= 1.0) r = 0.0;
    return r;
}

bool on_torus(const PhaseState4& s) {
    auto ok = [](double v) { return std::isfinite(v) && v >= 0.0 && v < 1.0; };
    return ok(s.xA) && ok(s.pA) && ok(s.xB) && ok(s.pB);
}

PhaseState4 kick_step(const PhaseState4& s, const MapParams& p) {
    const double xA = s.xA - p.tau * std::sin(kTwoPi * s.pA);
    const double xB = s.xB - p.tau * std::sin(kTwoPi * s.pB);

    const double cxA = p.coupling_uses_new_positions ? xA : s.xA;
    const double cxB = p.coupling_uses_new_positions ? xB : s.xB;
    const double coupling = 2.0 * p.tau * p.eps;

    const double pA = s.pA + p.tau * p.g * std::sin(kTwoPi * xA) +
                      coupling * std::sin(kTwoPi * cxA) * std::cos(kTwoPi * cxB);
    const double pB = s.pB + p.tau * p.g * std::sin(kTwoPi * xB) +
                      coupling * std::sin(kTwoPi * cxB) * std::cos(kTwoPi * cxA);

    return {wrap_unit(xA), wrap_unit(pA), wrap_unit(xB), wrap_unit(pB)};
}

void iterate(const PhaseState4& s0, const MapParams& p, const TrajectoryLengths& lengths,
             const std::function<void(std::size_t, const PhaseState4&)>& visit) {
    validate(s0, lengths);
    PhaseState4 s = s0;
    for (std::size_t n = 1; n <= lengths.n_total; ++n) {
        s = kick_step(s, p);
        if (n > lengths.n_transient) visit(n, s);
    }
}

TrajectorySeries simulate_trajectory(const PhaseState4& s0, const MapParams& p,
                                     const TrajectoryLengths& lengths) {
    validate(s0, lengths);
    TrajectorySeries out;
    out.reserve(lengths.recorded());
    iterate(s0, p, lengths, [&](std::size_t, const PhaseState4& s) { out.push_back(s); });
    return out;
}

double step_interaction_energy(const PhaseState4& s, double eps) {
    return 2.0 * eps * std::cos(kTwoPi * s.xA) * std::cos(kTwoPi * s.xB);
}

double average_interaction_energy(const TrajectorySeries& traj, double eps) {
    if (traj.empty()) throw std::invalid_argument("average over an empty trajectory");
    double sum = 0.0;
    for (const auto& s : traj) sum += step_interaction_energy(s, eps);
    return sum / static_cast<double>(traj.size());
}

} // namespace harper::classical
