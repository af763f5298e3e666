#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "harper_sync/classical.hpp"

namespace harper::sync {

/// A point of one projected phase plane, (x, p) in [0, 1)^2.
struct PlanePoint {
    double x = 0.0;
    double p = 0.0;
};

enum class Chain { A, B };

/// M x M occupation density of a projected phase plane. Cell (i, j) covers
/// x in [i/M, (i+1)/M) and p in [j/M, (j+1)/M); values integrate to one with
/// cell area 1/M^2.
class DensityGrid {
public:
    DensityGrid() = default;
    DensityGrid(std::size_t m, std::vector<double> cells);

    std::size_t m() const { return m_; }
    double operator()(std::size_t i, std::size_t j) const { return cells_[i * m_ + j]; }
    const std::vector<double>& cells() const { return cells_; }

    /// Sum of density times cell area.
    double total_mass() const;

private:
    std::size_t m_ = 0;
    std::vector<double> cells_;
};

/// Integer occupation counts; order-independent, finalised into a DensityGrid.
class DensityAccumulator {
public:
    explicit DensityAccumulator(std::size_t m);

    /// Throws std::invalid_argument when the point is outside [0,1)^2.
    void add(double x, double p);
    std::uint64_t samples() const { return samples_; }
    DensityGrid finish() const;

private:
    std::size_t m_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t samples_ = 0;
};

DensityGrid build_density_grid(std::span<const PlanePoint> points, std::size_t m);

/// (x, p) of one chain for every state in the trajectory.
std::vector<PlanePoint> project(const classical::TrajectorySeries& traj, Chain chain);

struct DensityDifference {
    DensityGrid delta;  ///< cellwise |a - b|
    double max = 0.0;
};

DensityDifference density_difference(const DensityGrid& a, const DensityGrid& b);

struct SyncVerdict {
    double max_delta_rho = 0.0;
    double threshold = 0.0;
    bool synchronized = false;
};

SyncVerdict sync_verdict(double delta_max, double rho_c);

/// How max|Δρ| is scaled before it is compared with rho_c.
enum class DeltaUnits {
    Density,   ///< raw density difference
    CellMass,  ///< density difference times the cell area 1/M^2
};

struct JpdOptions {
    std::size_t m = 20;
    double rho_c = 1e-3;
    DeltaUnits units = DeltaUnits::CellMass;
};

/// Both projected densities of a run, their difference, and the verdict.
struct JpdResult {
    DensityGrid grid_a;
    DensityGrid grid_b;
    DensityDifference difference;
    SyncVerdict verdict;
    double e_int = 0.0;  ///< average interaction energy of the same run
};

/// Single streaming pass over a fresh trajectory: both grids, their
/// comparison, and the average interaction energy.
JpdResult analyze_run(const classical::PhaseState4& s0, const classical::MapParams& p,
                      const classical::TrajectoryLengths& lengths, const JpdOptions& opts);

/// Compare the two grids of an already-built trajectory.
JpdResult analyze_trajectory(const classical::TrajectorySeries& traj, double eps,
                             const JpdOptions& opts);

struct CurvePoint {
    double eps = 0.0;
    double e_int = 0.0;
};

/// Average interaction energy versus coupling; one fresh trajectory per eps.
/// Rows come back in eps order whatever the worker count.
std::vector<CurvePoint> interaction_energy_curve(const classical::PhaseState4& s0,
                                                 const classical::MapParams& base,
                                                 std::span<const double> eps_grid,
                                                 const classical::TrajectoryLengths& lengths,
                                                 unsigned threads);

struct KinkOptions {
    double factor = 5.0;
};

/// |centered second difference| / robust scale at every point of the curve
/// (endpoints are 0).
std::vector<double> kink_scores(std::span<const CurvePoint> curve);

/// Location of the strongest slope discontinuity, if its score exceeds
/// `opts.factor`. Requires >= 5 uniformly spaced points.
std::optional<double> detect_kink(std::span<const CurvePoint> curve, const KinkOptions& opts = {});

} // namespace harper::sync
