#include "harper_sync/magnon.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace harper::magnon {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> i_power(long k) {
    switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

} // namespace

PropagatorMatrix::PropagatorMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw std::invalid_argument("propagator must be square");
}

PropagatorMatrix ring_propagator(std::size_t n, double t) {
    if (n < 2) throw std::invalid_argument("chain length must be >= 2");
    if (!std::isfinite(t)) throw std::invalid_argument("evolution time must be finite");
    const double dn = static_cast<double>(n);

    // Circulant: compute one column by the momentum sum, then tile.
    Eigen::VectorXcd eigenphase(static_cast<Eigen::Index>(n));
    for (std::size_t k = 1; k <= n; ++k) {
        eigenphase(static_cast<Eigen::Index>(k - 1)) =
            std::polar(1.0, t * std::cos(kTwoPi * static_cast<double>(k) / dn));
    }
    Eigen::VectorXcd column(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        // d = x - x' = -r for x = 1, x' = 1 + r
        std::complex<double> sum{0.0, 0.0};
        for (std::size_t k = 1; k <= n; ++k) {
            const auto phase_index = (n - (r * k) % n) % n;  // k * (-r) mod n
            sum += std::polar(1.0, kTwoPi * static_cast<double>(phase_index) / dn) *
                   eigenphase(static_cast<Eigen::Index>(k - 1));
        }
        column(static_cast<Eigen::Index>(r)) = sum / dn;
    }

    Eigen::MatrixXcd g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t xp = 0; xp < n; ++xp)
            g(static_cast<Eigen::Index>(xp), static_cast<Eigen::Index>(x)) =
                column(static_cast<Eigen::Index>((xp + n - x) % n));
    return PropagatorMatrix(std::move(g));
}

std::vector<double> bessel_j_sequence(std::size_t max_order, double t) {
    std::vector<double> out(max_order + 1, 0.0);
    if (t == 0.0) {
        out[0] = 1.0;
        return out;
    }
    const double x = std::abs(t);
    const std::size_t top = std::max<std::size_t>(max_order, static_cast<std::size_t>(x));
    std::size_t start = top + 20 + static_cast<std::size_t>(std::sqrt(40.0 * static_cast<double>(top + 1)));
    start += start % 2;  // even start keeps the normalisation sum aligned

    std::vector<double> seq(start + 2, 0.0);
    seq[start + 1] = 0.0;
    seq[start] = 1e-300;
    for (std::size_t k = start; k >= 1; --k) {
        seq[k - 1] = 2.0 * static_cast<double>(k) / x * seq[k] - seq[k + 1];
        if (std::abs(seq[k - 1]) > 1e250) {
            for (std::size_t j = k - 1; j <= start; ++j) seq[j] *= 1e-250;
        }
    }
    // J_0 + 2 sum_{k>=1} J_{2k} = 1
    double norm = seq[0];
    for (std::size_t k = 2; k <= start; k += 2) norm += 2.0 * seq[k];
    for (std::size_t k = 0; k <= max_order; ++k) {
        out[k] = seq[k] / norm;
        if (t < 0.0 && k % 2 == 1) out[k] = -out[k];
    }
    return out;
}

double bessel_j(const std::vector<double>& sequence, long order) {
    const auto k = static_cast<std::size_t>(order < 0 ? -order : order);
    if (k >= sequence.size()) throw std::out_of_range("Bessel order beyond precomputed sequence");
    const double v = sequence[k];
    return (order < 0 && k % 2 == 1) ? -v : v;
}

PropagatorMatrix bessel_propagator(std::size_t n, double t, std::size_t windings) {
    if (n < 2) throw std::invalid_argument("chain length must be >= 2");
    if (!std::isfinite(t)) throw std::invalid_argument("evolution time must be finite");
    const long ln = static_cast<long>(n);
    const long w = static_cast<long>(windings);
    const auto j = bessel_j_sequence(static_cast<std::size_t>((w + 1) * ln), t);

    Eigen::VectorXcd column(ln);
    for (long r = 0; r < ln; ++r) {
        // x = 1, x' = 1 + r: d = -r reduced to (-N/2, N/2]
        long d = -r;
        if (2 * d <= -ln) d += ln;
        std::complex<double> sum{0.0, 0.0};
        for (long m = -w; m <= w; ++m) {
            const long k = d + m * ln;
            sum += i_power(k) * bessel_j(j, k);
        }
        column(r) = sum;
    }

    Eigen::MatrixXcd g(ln, ln);
    for (long x = 0; x < ln; ++x)
        for (long xp = 0; xp < ln; ++xp) g(xp, x) = column((xp - x + ln) % ln);
    return PropagatorMatrix(std::move(g));
}

} // namespace harper::magnon
