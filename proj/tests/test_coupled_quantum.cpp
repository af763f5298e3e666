#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>

#include "harper_sync/coupled_quantum.hpp"
#include "harper_sync/observables.hpp"
#include "oracles.hpp"

using namespace harper;
using namespace harper::quantum;
using cd = std::complex<double>;

namespace {

QuantumParams params(std::size_t n, double tau, double eps, Coupling c = Coupling::Global, double g = 1.0) {
    QuantumParams p;
    p.n = n;
    p.tau = tau;
    p.g = g;
    p.eps = eps;
    p.coupling = c;
    return p;
}

double max_diff(const JointAmplitude& a, const JointAmplitude& b) {
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

} // namespace

TEST_SUITE("coupled-quantum") {

TEST_CASE("kick phases") {
    const auto flat = kick_phase_grid(params(8, 0.3, 0.0, Coupling::Global, 0.0));
    CHECK((flat.phases.array() - cd(1.0, 0.0)).abs().maxCoeff() == 0.0);

    const auto global = kick_phase_grid(params(100, 0.3, 0.5));
    // x = N has c = 1, y = N/2 has c = -1: exponent 1 - 1 + 1 = 1
    CHECK(std::abs(global.phases(99, 49) - std::polar(1.0, 1.0)) < 1e-15);
    CHECK((global.phases.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-15);

    const auto p = params(10, 0.3, 0.7, Coupling::Local);
    const auto local = kick_phase_grid(p);
    for (std::size_t x = 1; x <= 10; ++x)
        for (std::size_t y = 1; y <= 10; ++y) {
            REQUIRE(std::abs(local.phases(static_cast<Eigen::Index>(x - 1), static_cast<Eigen::Index>(y - 1)) -
                             oracle::kick_phase(x, y, p)) < 1e-15);
        }
    const double c3 = oracle::site_cos(3, 10);
    CHECK(std::abs(local.phases(2, 2) - std::polar(1.0, 2.0 * c3)) < 1e-15);
}

TEST_CASE("identity propagation with unit phases leaves the state alone") {
    const auto p = params(6, 0.3, 0.0, Coupling::Global, 0.0);
    const auto psi = initial_delta_state(6, 2, 5);
    const magnon::PropagatorMatrix eye(Eigen::MatrixXcd::Identity(6, 6));
    CHECK(max_diff(evolve_one_kick(psi, eye, kick_phase_grid(p)), psi) == 0.0);
}

TEST_CASE("one kick from a delta state reads off propagator columns") {
    const auto p = params(100, 0.3, 0.3);
    const auto g = kick_propagator(p);
    const auto ph = kick_phase_grid(p);
    const auto psi1 = evolve_one_kick(initial_delta_state(100, 1, 50), g, ph);
    for (std::size_t x : {1u, 2u, 37u, 100u})
        for (std::size_t y : {1u, 49u, 50u, 51u, 99u}) {
            const cd expect = g.at(x, 1) * g.at(y, 50) *
                              ph.phases(static_cast<Eigen::Index>(x - 1), static_cast<Eigen::Index>(y - 1));
            CHECK(std::abs(psi1.at(x, y) - expect) < 1e-15);
        }
}

TEST_CASE("uncoupled single kick factorises") {
    const auto p = params(9, 0.3, 0.0);
    const auto psi1 = evolve(initial_delta_state(9, 2, 7), p, 1);
    const Eigen::MatrixXcd& m = psi1.matrix();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    CHECK(svd.singularValues()(1) < 1e-13);
}

TEST_CASE("zero kicks return the initial state") {
    const auto psi0 = initial_delta_state(12, 3, 4);
    CHECK(max_diff(evolve(psi0, params(12, 0.3, 0.5), 0), psi0) == 0.0);
}

TEST_CASE("N = 4, two kicks match the explicit 16 x 16 unitary") {
    const auto p = params(4, 0.3, 0.3);
    const auto u = oracle::one_kick_unitary(p);
    const auto psi0 = initial_delta_state(4, 1, 3);
    const Eigen::VectorXcd ref = u * (u * oracle::flatten(psi0.matrix()));
    for (auto how : {Propagation::Dense, Propagation::Fft}) {
        CHECK(oracle::max_abs_difference(evolve(psi0, p, 2, {}, how).matrix(), ref) < 1e-10);
    }
}

TEST_CASE("brute-force equivalence for N <= 6, both couplings, up to three kicks") {
    for (std::size_t n : {2u, 3u, 4u, 5u, 6u})
        for (auto mode : {Coupling::Global, Coupling::Local})
            for (double eps : {0.0, 0.3, 0.9}) {
                const auto p = params(n, 0.4, eps, mode, 1.3);
                const auto u = oracle::one_kick_unitary(p);
                const auto psi0 = initial_delta_state(n, 1, n / 2 + 1);
                Eigen::VectorXcd ref = oracle::flatten(psi0.matrix());
                for (std::size_t k = 1; k <= 3; ++k) {
                    ref = u * ref;
                    for (auto how : {Propagation::Dense, Propagation::Fft}) {
                        REQUIRE(oracle::max_abs_difference(evolve(psi0, p, k, {}, how).matrix(), ref) < 1e-10);
                    }
                }
            }
}

TEST_CASE("dense and FFT paths agree over many kicks") {
    for (auto mode : {Coupling::Global, Coupling::Local}) {
        const auto p = params(100, 0.3, 0.5, mode);
        const auto psi0 = initial_delta_state(100, 1, 50);
        CHECK(max_diff(evolve(psi0, p, 60, {}, Propagation::Dense), evolve(psi0, p, 60, {}, Propagation::Fft)) < 1e-12);
    }
    // Odd sizes go through the same transform.
    const auto p = params(15, 0.7, 0.4);
    const auto psi0 = initial_delta_state(15, 4, 11);
    CHECK(max_diff(evolve(psi0, p, 40, {}, Propagation::Dense), evolve(psi0, p, 40, {}, Propagation::Fft)) < 1e-12);
}

TEST_CASE("Bessel-form evolution tracks the ring form at N = 100") {
    auto p = params(100, 0.3, 0.5);
    auto q = p;
    q.form = PropagatorForm::Bessel;
    const auto psi0 = initial_delta_state(100, 1, 50);
    CHECK(max_diff(evolve(psi0, p, 100), evolve(psi0, q, 100)) < 1e-9);
}

TEST_CASE("norm conservation over 1000 kicks") {
    for (auto mode : {Coupling::Global, Coupling::Local}) {
        const auto psi = evolve(initial_delta_state(100, 1, 50), params(100, 0.5, 0.5, mode), 1000);
        CHECK(std::abs(psi.norm_squared() - 1.0) < 1e-9);
    }
}

TEST_CASE("recorder sees every kick in order") {
    std::size_t expected = 1;
    const auto p = params(10, 0.3, 0.2);
    const auto last = evolve(initial_delta_state(10, 1, 5), p, 25, [&](std::size_t k, const JointAmplitude& s) {
        CHECK(k == expected++);
        CHECK(std::abs(s.norm_squared() - 1.0) < 1e-12);
    });
    CHECK(expected == 26);
    CHECK(last.n() == 10);
}

TEST_CASE("uncoupled evolution stays a product state") {
    const auto p = params(100, 0.3, 0.0);
    evolve(initial_delta_state(100, 1, 50), p, 300, [](std::size_t, const JointAmplitude& s) {
        REQUIRE(observables::von_neumann_entropy(observables::reduced_density(s, observables::Subsystem::A)) < 1e-12);
    });
}

TEST_CASE("exchange symmetry in global mode") {
    const auto p = params(20, 0.3, 0.6);
    const auto a = evolve(initial_delta_state(20, 3, 11), p, 50);
    const auto b = evolve(initial_delta_state(20, 11, 3), p, 50);
    CHECK(max_diff(a.transposed(), b) < 1e-13);
}

TEST_CASE("recursion consistency") {
    const auto p = params(30, 0.3, 0.45);
    const auto psi0 = initial_delta_state(30, 1, 15);
    const auto whole = evolve(psi0, p, 70);
    const auto split = evolve(evolve(psi0, p, 30), p, 40);
    CHECK(max_diff(whole, split) < 1e-12);
}

TEST_CASE("initial delta states") {
    const auto g = initial_delta_state(100, 1, 50);
    CHECK(g.at(1, 50) == cd(1.0, 0.0));
    CHECK(g.norm_squared() == 1.0);
    const auto l = initial_delta_state(100, 1, 20);
    CHECK(l.at(1, 20) == cd(1.0, 0.0));
    CHECK(l.at(1, 50) == cd(0.0, 0.0));
    CHECK_THROWS_AS(initial_delta_state(100, 0, 5), std::invalid_argument);
    CHECK_THROWS_AS(initial_delta_state(100, 1, 101), std::invalid_argument);
}

TEST_CASE("invalid parameters and mismatched sizes") {
    CHECK_THROWS_AS(kick_phase_grid(params(1, 0.3, 0.1)), std::invalid_argument);
    CHECK_THROWS_AS(kick_phase_grid(params(10, 0.0, 0.1)), std::invalid_argument);
    CHECK_THROWS_AS(kick_phase_grid(params(10, 0.3, INFINITY)), std::invalid_argument);
    const auto p = params(10, 0.3, 0.1);
    CHECK_THROWS_AS(evolve(initial_delta_state(8, 1, 2), p, 3), std::invalid_argument);
    CHECK_THROWS_AS(evolve_one_kick(initial_delta_state(8, 1, 2), kick_propagator(p), kick_phase_grid(p)),
                    std::invalid_argument);
}

} // TEST_SUITE
