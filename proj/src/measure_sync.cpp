#include "harper_sync/measure_sync.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "harper_sync/parallel.hpp"

namespace harper::sync {

DensityGrid::DensityGrid(std::size_t m, std::vector<double> cells)
    : m_(m), cells_(std::move(cells)) {
    if (m_ == 0 || cells_.size() != m_ * m_) throw std::invalid_argument("density grid shape");
}

double DensityGrid::total_mass() const {
    double sum = 0.0;
    for (double c : cells_) sum += c;
    return sum / static_cast<double>(m_ * m_);
}

DensityAccumulator::DensityAccumulator(std::size_t m) : m_(m), counts_(m * m, 0) {
    if (m == 0) throw std::invalid_argument("grid size m must be >= 1");
}

void DensityAccumulator::add(double x, double p) {
    if (!(x >= 0.0 && x < 1.0 && p >= 0.0 && p < 1.0)) {
        throw std::invalid_argument("phase point outside [0,1)^2");
    }
    const auto cell = [this](double v) {
        return std::min(static_cast<std::size_t>(v * static_cast<double>(m_)), m_ - 1);
    };
    ++counts_[cell(x) * m_ + cell(p)];
    ++samples_;
}

DensityGrid DensityAccumulator::finish() const {
    if (samples_ == 0) throw std::invalid_argument("density grid of an empty point set");
    const double scale = static_cast<double>(m_ * m_) / static_cast<double>(samples_);
    std::vector<double> cells(counts_.size());
    for (std::size_t k = 0; k < counts_.size(); ++k) cells[k] = static_cast<double>(counts_[k]) * scale;
    return {m_, std::move(cells)};
}

DensityGrid build_density_grid(std::span<const PlanePoint> points, std::size_t m) {
    DensityAccumulator acc(m);
    for (const auto& pt : points) acc.add(pt.x, pt.p);
    return acc.finish();
}

std::vector<PlanePoint> project(const classical::TrajectorySeries& traj, Chain chain) {
    std::vector<PlanePoint> out;
    out.reserve(traj.size());
    for (const auto& s : traj) {
        out.push_back(chain == Chain::A ? PlanePoint{s.xA, s.pA} : PlanePoint{s.xB, s.pB});
    }
    return out;
}

DensityDifference density_difference(const DensityGrid& a, const DensityGrid& b) {
    if (a.m() != b.m()) throw std::invalid_argument("density grids differ in size");
    std::vector<double> cells(a.cells().size());
    double max = 0.0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        cells[k] = std::abs(a.cells()[k] - b.cells()[k]);
        max = std::max(max, cells[k]);
    }
    return {DensityGrid(a.m(), std::move(cells)), max};
}

SyncVerdict sync_verdict(double delta_max, double rho_c) {
    return {delta_max, rho_c, delta_max <= rho_c};
}

namespace {

JpdResult compare(DensityGrid a, DensityGrid b, double e_int, const JpdOptions& opts) {
    JpdResult r;
    r.grid_a = std::move(a);
    r.grid_b = std::move(b);
    r.difference = density_difference(r.grid_a, r.grid_b);
    double scaled = r.difference.max;
    if (opts.units == DeltaUnits::CellMass) scaled /= static_cast<double>(opts.m * opts.m);
    r.verdict = sync_verdict(scaled, opts.rho_c);
    r.e_int = e_int;
    return r;
}

} // namespace

JpdResult analyze_run(const classical::PhaseState4& s0, const classical::MapParams& p,
                      const classical::TrajectoryLengths& lengths, const JpdOptions& opts) {
    DensityAccumulator acc_a(opts.m), acc_b(opts.m);
    double sum = 0.0;
    classical::iterate(s0, p, lengths, [&](std::size_t, const classical::PhaseState4& s) {
        acc_a.add(s.xA, s.pA);
        acc_b.add(s.xB, s.pB);
        sum += classical::step_interaction_energy(s, p.eps);
    });
    return compare(acc_a.finish(), acc_b.finish(), sum / static_cast<double>(lengths.recorded()),
                   opts);
}

JpdResult analyze_trajectory(const classical::TrajectorySeries& traj, double eps,
                             const JpdOptions& opts) {
    return compare(build_density_grid(project(traj, Chain::A), opts.m),
                   build_density_grid(project(traj, Chain::B), opts.m),
                   classical::average_interaction_energy(traj, eps), opts);
}

std::vector<CurvePoint> interaction_energy_curve(const classical::PhaseState4& s0,
                                                 const classical::MapParams& base,
                                                 std::span<const double> eps_grid,
                                                 const classical::TrajectoryLengths& lengths,
                                                 unsigned threads) {
    if (eps_grid.empty()) throw std::invalid_argument("empty eps grid");
    for (std::size_t i = 1; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > eps_grid[i - 1])) throw std::invalid_argument("eps grid must increase");
    }
    const std::vector<double> grid(eps_grid.begin(), eps_grid.end());
    return parallel_map<CurvePoint>(grid.size(), threads, [&](std::size_t i) {
        classical::MapParams p = base;
        p.eps = grid[i];
        double sum = 0.0;
        classical::iterate(s0, p, lengths, [&](std::size_t, const classical::PhaseState4& s) {
            sum += classical::step_interaction_energy(s, p.eps);
        });
        return CurvePoint{grid[i], sum / static_cast<double>(lengths.recorded())};
    });
}

std::vector<double> kink_scores(std::span<const CurvePoint> curve) {
    const std::size_t n = curve.size();
    if (n < 5) throw std::invalid_argument("kink detection needs at least 5 points");
    const double h = curve[1].eps - curve[0].eps;
    for (std::size_t i = 1; i < n; ++i) {
        const double step = curve[i].eps - curve[i - 1].eps;
        if (!(h > 0.0) || std::abs(step - h) > 1e-9 * std::max(1.0, std::abs(h))) {
            throw std::invalid_argument("kink detection needs a uniform eps spacing");
        }
    }

    double scale_e = 0.0;
    for (const auto& c : curve) scale_e = std::max(scale_e, std::abs(c.e_int));
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale_e;

    std::vector<double> second(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double d = std::abs(curve[i - 1].e_int - 2.0 * curve[i].e_int + curve[i + 1].e_int);
        second[i] = d > floor ? d : 0.0;
    }

    std::vector<double> interior(second.begin() + 1, second.end() - 1);
    std::nth_element(interior.begin(), interior.begin() + interior.size() / 2, interior.end());
    double median = interior[interior.size() / 2];
    if (interior.size() % 2 == 0) {
        const double lower = *std::max_element(interior.begin(), interior.begin() + interior.size() / 2);
        median = 0.5 * (median + lower);
    }

    const double scale = std::max(median, floor);
    std::vector<double> scores(n, 0.0);
    if (scale <= 0.0) return scores;
    for (std::size_t i = 1; i + 1 < n; ++i) scores[i] = second[i] / scale;
    return scores;
}

std::optional<double> detect_kink(std::span<const CurvePoint> curve, const KinkOptions& opts) {
    const auto scores = kink_scores(curve);
    std::optional<std::size_t> best;
    for (std::size_t i = 1; i + 1 < scores.size(); ++i) {
        if (scores[i] > opts.factor && (!best || scores[i] > scores[*best])) best = i;
    }
    if (!best) return std::nullopt;
    return curve[*best].eps;
}

} // namespace harper::sync
