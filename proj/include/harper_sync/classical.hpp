#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace harper::classical {

/// The four coordinates of the coupled pair on the unit torus.
struct PhaseState4 {
    double xA = 0.0;
    double pA = 0.0;
    double xB = 0.0;
    double pB = 0.0;

    friend bool operator==(const PhaseState4&, const PhaseState4&) = default;
};

struct MapParams {
    double tau = 0.3;  ///< kick-interval parameter
    double g = 1.0;    ///< potential strength
    double eps = 0.0;  ///< inter-chain coupling
    /// Evaluate the coupling kick at the updated positions x(n+1) instead of
    /// x(n). Off by default; exists for sensitivity checks only.
    bool coupling_uses_new_positions = false;
};

/// Burn-in and total step counts of a trajectory. States n_transient+1 ..
/// n_total are recorded.
struct TrajectoryLengths {
    std::size_t n_transient = 10'000;
    std::size_t n_total = 1'000'000 + 10'000;

    std::size_t recorded() const { return n_total - n_transient; }
};

using TrajectorySeries = std::vector<PhaseState4>;

/// Reduce to [0, 1) with a floor-based remainder.
double wrap_unit(double v);

/// True when all four coordinates are finite and lie in [0, 1).
bool on_torus(const PhaseState4& s);

/// One application of the coupled kicked-Harper map.
///
/// Positions move with the old momenta. Each momentum receives the on-site
/// kick evaluated at its updated position plus the coupling kick
/// 2 tau eps sin(2 pi x_self) cos(2 pi x_other) evaluated at the old positions
/// (or the new ones when `coupling_uses_new_positions`). All four coordinates
/// are then reduced mod 1.
PhaseState4 kick_step(const PhaseState4& s, const MapParams& p);

/// Iterate the map and hand every recorded state (with its step index, 1-based)
/// to `visit`. This is the streaming form of simulate_trajectory.
void iterate(const PhaseState4& s0, const MapParams& p, const TrajectoryLengths& lengths,
             const std::function<void(std::size_t, const PhaseState4&)>& visit);

TrajectorySeries simulate_trajectory(const PhaseState4& s0, const MapParams& p,
                                     const TrajectoryLengths& lengths);

/// Per-kick coupling amplitude 2 eps cos(2 pi xA) cos(2 pi xB).
double step_interaction_energy(const PhaseState4& s, double eps);

/// Time average of step_interaction_energy over a recorded trajectory.
double average_interaction_energy(const TrajectorySeries& traj, double eps);

} // namespace harper::classical
