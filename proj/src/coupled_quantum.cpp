#include "harper_sync/coupled_quantum.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace harper::quantum {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

void QuantumParams::validate() const {
    if (n < 2) throw std::invalid_argument("chain length n must be >= 2");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
    if (!std::isfinite(g) || !std::isfinite(eps)) throw std::invalid_argument("g and eps must be finite");
}

double QuantumParams::kick_time() const { return tau / kTwoPi; }

JointAmplitude::JointAmplitude(Eigen::MatrixXcd psi) : psi_(std::move(psi)) {
    if (psi_.rows() != psi_.cols()) throw std::invalid_argument("joint amplitude must be square");
}

std::vector<double> site_cosines(std::size_t n) {
    std::vector<double> c(n);
    for (std::size_t j = 1; j <= n; ++j) c[j - 1] = std::cos(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    return c;
}

KickPhaseGrid kick_phase_grid(const QuantumParams& p) {
    p.validate();
    const auto c = site_cosines(p.n);
    const auto n = static_cast<Eigen::Index>(p.n);
    Eigen::MatrixXcd ph(n, n);
    for (Eigen::Index x = 0; x < n; ++x) {
        for (Eigen::Index y = 0; y < n; ++y) {
            const double cx = c[static_cast<std::size_t>(x)];
            const double cy = c[static_cast<std::size_t>(y)];
            double exponent = 0.0;
            if (p.coupling == Coupling::Global) {
                exponent = p.g * cx + p.g * cy - 2.0 * p.eps * cx * cy;
            } else {
                const double strength = p.g + (x == y ? 0.0 : p.eps);
                exponent = strength * (cx + cy);
            }
            ph(x, y) = std::polar(1.0, exponent);
        }
    }
    return {p.n, std::move(ph), p.coupling};
}

magnon::PropagatorMatrix kick_propagator(const QuantumParams& p) {
    p.validate();
    return p.form == PropagatorForm::Ring ? magnon::ring_propagator(p.n, p.kick_time())
                                          : magnon::bessel_propagator(p.n, p.kick_time(), p.windings);
}

JointAmplitude evolve_one_kick(const JointAmplitude& state, const magnon::PropagatorMatrix& prop,
                               const KickPhaseGrid& phases) {
    if (state.n() != prop.n() || state.n() != phases.n) {
        throw std::invalid_argument("dimension mismatch between state, propagator and phases");
    }
    const Eigen::MatrixXcd& g = prop.matrix();
    Eigen::MatrixXcd moved = g * state.matrix() * g.transpose();
    return JointAmplitude(moved.cwiseProduct(phases.phases));
}

struct KickEvolver::FftPath {
    std::size_t n = 0;
    fftw_complex* buffer = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::vector<std::complex<double>> spectrum;  ///< kernel DFT / n, per axis

    FftPath(const magnon::PropagatorMatrix& prop) : n(prop.n()) {
        const Eigen::VectorXcd kernel = prop.kernel();
        const double dn = static_cast<double>(n);
        spectrum.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> sum{0.0, 0.0};
            for (std::size_t a = 0; a < n; ++a) {
                sum += kernel(static_cast<Eigen::Index>(a)) *
                       std::polar(1.0, -kTwoPi * static_cast<double>((a * k) % n) / dn);
            }
            spectrum[k] = sum / dn;
        }
        std::lock_guard lock(planner_mutex());
        buffer = fftw_alloc_complex(n * n);
        const int dim = static_cast<int>(n);
        forward = fftw_plan_dft_2d(dim, dim, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
        backward = fftw_plan_dft_2d(dim, dim, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~FftPath() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(buffer);
    }

    FftPath(const FftPath&) = delete;
    FftPath& operator=(const FftPath&) = delete;

    // Column-major psi(x, y) sits at x + y n, which FFTW reads as a row-major
    // [y][x] array. The kernel is the same on both axes, so the layout swap
    // does not matter.
    void apply(Eigen::MatrixXcd& psi, const Eigen::MatrixXcd& phases) {
        auto* data = reinterpret_cast<std::complex<double>*>(buffer);
        const std::size_t total = n * n;
        std::copy(psi.data(), psi.data() + total, data);
        fftw_execute(forward);
        for (std::size_t l = 0; l < n; ++l)
            for (std::size_t k = 0; k < n; ++k) data[l * n + k] *= spectrum[l] * spectrum[k];
        fftw_execute(backward);
        const std::complex<double>* ph = phases.data();
        std::complex<double>* out = psi.data();
        for (std::size_t i = 0; i < total; ++i) out[i] = data[i] * ph[i];
    }
};

KickEvolver::KickEvolver(const QuantumParams& p, Propagation how)
    : prop_(kick_propagator(p)), phases_(kick_phase_grid(p)), how_(how) {
    if (how_ == Propagation::Fft) fft_ = std::make_unique<FftPath>(prop_);
}

KickEvolver::~KickEvolver() = default;
KickEvolver::KickEvolver(KickEvolver&&) noexcept = default;
KickEvolver& KickEvolver::operator=(KickEvolver&&) noexcept = default;

void KickEvolver::step(JointAmplitude& state) {
    if (state.n() != prop_.n()) throw std::invalid_argument("state size does not match evolver");
    if (how_ == Propagation::Fft) {
        fft_->apply(state.matrix(), phases_.phases);
    } else {
        state = evolve_one_kick(state, prop_, phases_);
    }
}

JointAmplitude evolve(const JointAmplitude& state0, const QuantumParams& p, std::size_t kicks,
                      const KickRecorder& recorder, Propagation how) {
    if (state0.n() != p.n) throw std::invalid_argument("state size does not match parameters");
    JointAmplitude state = state0;
    if (kicks == 0) return state;
    KickEvolver evolver(p, how);
    for (std::size_t k = 1; k <= kicks; ++k) {
        evolver.step(state);
        if (recorder) recorder(k, state);
    }
    return state;
}

JointAmplitude initial_delta_state(std::size_t n, std::size_t x0, std::size_t y0) {
    if (n < 2) throw std::invalid_argument("chain length n must be >= 2");
    if (x0 < 1 || x0 > n || y0 < 1 || y0 > n) throw std::invalid_argument("initial site out of range");
    Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    psi(static_cast<Eigen::Index>(x0 - 1), static_cast<Eigen::Index>(y0 - 1)) = 1.0;
    return JointAmplitude(std::move(psi));
}

} // namespace harper::quantum
