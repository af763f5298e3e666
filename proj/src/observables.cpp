#include "harper_sync/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "harper_sync/errors.hpp"

namespace harper::observables {

namespace {

void require_real(std::complex<double> v, const char* what) {
    if (std::abs(v.imag()) > 1e-12) {
        throw NumericError(std::string(what) + " has imaginary residue " + std::to_string(v.imag()));
    }
}

void require_site(std::size_t j, std::size_t n) {
    if (j < 1 || j > n) throw std::invalid_argument("qubit site out of range");
}

} // namespace

double hopping_energy(const quantum::JointAmplitude& state, Subsystem which) {
    const Eigen::MatrixXcd& psi = state.matrix();
    const Eigen::Index n = psi.rows();
    std::complex<double> sum{0.0, 0.0};
    for (Eigen::Index y = 0; y < n; ++y) {
        for (Eigen::Index x = 0; x < n; ++x) {
            std::complex<double> neighbours;
            if (which == Subsystem::A) {
                neighbours = psi((x + 1) % n, y) + psi((x + n - 1) % n, y);
            } else {
                neighbours = psi(x, (y + 1) % n) + psi(x, (y + n - 1) % n);
            }
            sum += std::conj(psi(x, y)) * neighbours;
        }
    }
    sum *= 0.5;
    require_real(sum, "hopping energy");
    return sum.real();
}

double coupling_energy(const quantum::JointAmplitude& state, double eps, quantum::Coupling mode) {
    const Eigen::MatrixXcd& psi = state.matrix();
    const auto n = static_cast<std::size_t>(psi.rows());
    const auto c = quantum::site_cosines(n);
    double sum = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < n; ++x) {
            const double w = std::norm(psi(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)));
            if (mode == quantum::Coupling::Global) {
                sum += w * c[x] * c[y];
            } else if (x != y) {
                sum += w * (c[x] + c[y]);
            }
        }
    }
    if (mode == quantum::Coupling::Global) return 2.0 * eps * sum;
    return eps * static_cast<double>(n) / 4.0 - eps * sum;
}

DensityMatrix reduced_density(const quantum::JointAmplitude& state, Subsystem which) {
    const Eigen::MatrixXcd& psi = state.matrix();
    if (which == Subsystem::A) return {psi * psi.adjoint()};
    return {psi.transpose() * psi.conjugate()};
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.rho, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericError("density matrix eigen-solve failed");
    double s = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double lambda = solver.eigenvalues()(k);
        if (lambda >= kEigenvalueFloor) s -= lambda * std::log(lambda);
    }
    const double upper = std::log(static_cast<double>(rho.dim()));
    if (s < -1e-12 || s > upper + 1e-10) {
        throw NumericError("von Neumann entropy " + std::to_string(s) + " outside [0, ln dim]");
    }
    return std::clamp(s, 0.0, upper);
}

double linear_entropy(const DensityMatrix& rho) {
    // Tr rho^2 of a nearly pure state can exceed 1 by round-off.
    return std::max(0.0, 1.0 - rho.purity());
}

double concurrence_between_systems(const DensityMatrix& rho_a) {
    return std::sqrt(2.0 * linear_entropy(rho_a));
}

QubitPairDistribution qubit_pair_distribution(const quantum::JointAmplitude& state, std::size_t jA,
                                              std::size_t jB) {
    const std::size_t n = state.n();
    require_site(jA, n);
    require_site(jB, n);
    const Eigen::MatrixXcd& psi = state.matrix();
    const auto a = static_cast<Eigen::Index>(jA - 1);
    const auto b = static_cast<Eigen::Index>(jB - 1);
    QubitPairDistribution d;
    d.p11 = std::norm(psi(a, b));
    d.p10 = psi.row(a).squaredNorm() - d.p11;
    d.p01 = psi.col(b).squaredNorm() - d.p11;
    d.p10 = std::max(d.p10, 0.0);
    d.p01 = std::max(d.p01, 0.0);
    d.p00 = std::max(0.0, 1.0 - d.p11 - d.p10 - d.p01);
    return d;
}

double pair_mutual_information(const QubitPairDistribution& d) {
    const double a1 = d.p11 + d.p10;
    const double b1 = d.p11 + d.p01;
    const double a0 = d.p01 + d.p00;
    const double b0 = d.p10 + d.p00;
    // sum p ln(p / (pa pb)), evaluated term-wise to avoid the cancellation of
    // H(A) + H(B) - H(AB) when the information is tiny
    auto term = [](double p, double pa, double pb) {
        if (p <= 0.0 || pa <= 0.0 || pb <= 0.0) return 0.0;
        return p * std::log(p / (pa * pb));
    };
    const double mi = term(d.p11, a1, b1) + term(d.p10, a1, b0) + term(d.p01, a0, b1) + term(d.p00, a0, b0);
    return mi < 0.0 ? 0.0 : mi;
}

double MutualInformationMap::max() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

MutualInformationMap mutual_information_map(const quantum::JointAmplitude& state) {
    const std::size_t n = state.n();
    const Eigen::MatrixXd prob = state.matrix().cwiseAbs2();
    const Eigen::VectorXd row_mass = prob.rowwise().sum();
    const Eigen::RowVectorXd col_mass = prob.colwise().sum();
    MutualInformationMap map{n, std::vector<double>(n * n, 0.0)};
    for (std::size_t jB = 1; jB <= n; ++jB) {
        for (std::size_t jA = 1; jA <= n; ++jA) {
            const auto a = static_cast<Eigen::Index>(jA - 1);
            const auto b = static_cast<Eigen::Index>(jB - 1);
            QubitPairDistribution d;
            d.p11 = prob(a, b);
            d.p10 = std::max(0.0, row_mass(a) - d.p11);
            d.p01 = std::max(0.0, col_mass(b) - d.p11);
            d.p00 = std::max(0.0, 1.0 - d.p11 - d.p10 - d.p01);
            map.values[(jB - 1) * n + (jA - 1)] = pair_mutual_information(d);
        }
    }
    return map;
}

} // namespace harper::observables
