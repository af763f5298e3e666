#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "harper_sync/coupled_quantum.hpp"

namespace harper::observables {

enum class Subsystem { A, B };

/// Reduced density matrix of one chain in the one-magnon basis.
struct DensityMatrix {
    Eigen::MatrixXcd rho;

    std::size_t dim() const { return static_cast<std::size_t>(rho.rows()); }
    /// Tr rho^2, evaluated as the squared Frobenius norm (rho is Hermitian).
    double purity() const { return rho.squaredNorm(); }
};

/// (1/2) sum psi*(x,y) [psi(x+1,y) + psi(x-1,y)] for A, analogously in y for
/// B, indices periodic. Throws NumericError if the imaginary residue exceeds
/// 1e-12.
double hopping_energy(const quantum::JointAmplitude& state, Subsystem which);

/// Global: 2 eps sum |psi|^2 c(x) c(y).
/// Local:  eps N / 4 - eps sum_{x != y} |psi|^2 [c(x) + c(y)].
double coupling_energy(const quantum::JointAmplitude& state, double eps, quantum::Coupling mode);

/// rho^A = psi psi^dagger; rho^B = psi^T psi^*.
DensityMatrix reduced_density(const quantum::JointAmplitude& state, Subsystem which);

/// Eigenvalues below this are treated as exact zeros before taking logs.
inline constexpr double kEigenvalueFloor = 1e-14;

/// -Tr rho ln rho in nats, from the Hermitian eigen-solve. Throws NumericError
/// outside [0, ln dim] beyond round-off.
double von_neumann_entropy(const DensityMatrix& rho);

/// 1 - Tr rho^2, with round-off below zero clamped to 0.
double linear_entropy(const DensityMatrix& rho);

/// sqrt(2 (1 - Tr rho_A^2)).
double concurrence_between_systems(const DensityMatrix& rho_a);

/// Occupation statistics of qubit jA of chain A and qubit jB of chain B
/// ("1" = down spin present).
struct QubitPairDistribution {
    double p11 = 0.0;
    double p10 = 0.0;
    double p01 = 0.0;
    double p00 = 0.0;
};

QubitPairDistribution qubit_pair_distribution(const quantum::JointAmplitude& state, std::size_t jA,
                                              std::size_t jB);

/// Mutual information (nats) of the two occupation bits. The pair RDM is
/// diagonal in the occupation basis within this sector, so this equals the
/// quantum mutual information S(jA) + S(jB) - S(jA, jB).
double pair_mutual_information(const QubitPairDistribution& d);

/// I(jA; jB) over all site pairs. value(jA, jB) is stored at
/// values[(jB - 1) * n + (jA - 1)]: rows follow jB, columns jA.
struct MutualInformationMap {
    std::size_t n = 0;
    std::vector<double> values;

    double value(std::size_t jA, std::size_t jB) const { return values[(jB - 1) * n + (jA - 1)]; }
    double max() const;
};

MutualInformationMap mutual_information_map(const quantum::JointAmplitude& state);

} // namespace harper::observables
