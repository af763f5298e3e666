#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace harper::magnon {

/// One-magnon evolution of a closed N-site XY chain over one time interval.
///
/// Entry (x', x) is the amplitude for the down spin to move from site x to
/// site x' (sites 1-based). The matrix is circulant: it depends only on
/// (x' - x) mod N, and `kernel()[k]` holds column x = 1 at x' = 1 + k.
class PropagatorMatrix {
public:
    PropagatorMatrix() = default;
    explicit PropagatorMatrix(Eigen::MatrixXcd entries);

    std::size_t n() const { return static_cast<std::size_t>(entries_.rows()); }
    std::complex<double> at(std::size_t x_to, std::size_t x_from) const {
        return entries_(static_cast<Eigen::Index>(x_to - 1), static_cast<Eigen::Index>(x_from - 1));
    }
    const Eigen::MatrixXcd& matrix() const { return entries_; }
    Eigen::VectorXcd kernel() const { return entries_.col(0); }

private:
    Eigen::MatrixXcd entries_;
};

/// Exact closed-chain propagator with one-magnon energy -cos p:
/// G(x', x) = (1/N) sum_k exp(i 2 pi k (x - x') / N) exp(i t cos(2 pi k / N)).
PropagatorMatrix ring_propagator(std::size_t n, double t);

/// Winding-summed Bessel kernel
/// G(x', x) = sum_{|m| <= windings} i^k J_k(t),  k = d + m N,
/// with d = x - x' the signed minimal displacement in (-N/2, N/2].
PropagatorMatrix bessel_propagator(std::size_t n, double t, std::size_t windings);

/// J_0(t) .. J_max_order(t) for integer orders, by normalised backward
/// recurrence.
std::vector<double> bessel_j_sequence(std::size_t max_order, double t);

/// Integer-order J_k(t) for any sign of k, from a precomputed sequence.
double bessel_j(const std::vector<double>& sequence, long order);

} // namespace harper::magnon
