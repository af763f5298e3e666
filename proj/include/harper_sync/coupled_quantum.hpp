#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "harper_sync/magnon.hpp"

namespace harper::quantum {

enum class Coupling { Global, Local };
enum class PropagatorForm { Ring, Bessel };
/// How G psi G^T is applied: dense matrix products (reference) or the
/// circulant 2D-FFT fast path.
enum class Propagation { Dense, Fft };

struct QuantumParams {
    std::size_t n = 100;
    double tau = 0.3;
    double g = 1.0;
    double eps = 0.0;
    Coupling coupling = Coupling::Global;
    PropagatorForm form = PropagatorForm::Ring;
    std::size_t windings = 3;  ///< Bessel form only

    /// Throws std::invalid_argument unless n >= 2, tau > 0 and g, eps finite.
    void validate() const;
    /// Inter-kick evolution time tau / 2 pi.
    double kick_time() const;
};

/// Amplitude psi(x, y) of the one-magnon-per-chain sector: x is the down-spin
/// site of chain A, y of chain B, both 1-based.
class JointAmplitude {
public:
    JointAmplitude() = default;
    explicit JointAmplitude(Eigen::MatrixXcd psi);

    std::size_t n() const { return static_cast<std::size_t>(psi_.rows()); }
    std::complex<double> at(std::size_t x, std::size_t y) const {
        return psi_(static_cast<Eigen::Index>(x - 1), static_cast<Eigen::Index>(y - 1));
    }
    const Eigen::MatrixXcd& matrix() const { return psi_; }
    Eigen::MatrixXcd& matrix() { return psi_; }
    double norm_squared() const { return psi_.squaredNorm(); }

    /// Swap the roles of the chains: psi'(x, y) = psi(y, x).
    JointAmplitude transposed() const { return JointAmplitude(psi_.transpose()); }

private:
    Eigen::MatrixXcd psi_;
};

/// Diagonal kick phase per (x, y); every entry has unit modulus.
struct KickPhaseGrid {
    std::size_t n = 0;
    Eigen::MatrixXcd phases;
    Coupling coupling = Coupling::Global;
};

/// cos(2 pi j / N) for j = 1..N (index j-1).
std::vector<double> site_cosines(std::size_t n);

/// Global: exp{i [g c(x) + g c(y) - 2 eps c(x) c(y)]}.
/// Local:  exp{i (g + eps (1 - delta_xy)) [c(x) + c(y)]}.
KickPhaseGrid kick_phase_grid(const QuantumParams& p);

/// Propagator for one inter-kick interval in the selected form.
magnon::PropagatorMatrix kick_propagator(const QuantumParams& p);

/// psi' = phases .* (G psi G^T). Dense reference implementation.
JointAmplitude evolve_one_kick(const JointAmplitude& state, const magnon::PropagatorMatrix& prop,
                               const KickPhaseGrid& phases);

/// Repeated kicks with fixed parameters. Holds the propagator, the phase grid
/// and (for the FFT path) the transform plans and work buffer, so one instance
/// must not be shared between threads.
class KickEvolver {
public:
    explicit KickEvolver(const QuantumParams& p, Propagation how = Propagation::Fft);
    ~KickEvolver();
    KickEvolver(KickEvolver&&) noexcept;
    KickEvolver& operator=(KickEvolver&&) noexcept;

    void step(JointAmplitude& state);

    const magnon::PropagatorMatrix& propagator() const { return prop_; }
    const KickPhaseGrid& phases() const { return phases_; }

private:
    struct FftPath;
    magnon::PropagatorMatrix prop_;
    KickPhaseGrid phases_;
    Propagation how_;
    std::unique_ptr<FftPath> fft_;
};

using KickRecorder = std::function<void(std::size_t kick, const JointAmplitude& state)>;

/// State after `kicks` kicks. `recorder` (optional) sees every post-kick state
/// in order, with 1-based kick index.
JointAmplitude evolve(const JointAmplitude& state0, const QuantumParams& p, std::size_t kicks,
                      const KickRecorder& recorder = {}, Propagation how = Propagation::Fft);

/// |x0; y0>, sites 1-based.
JointAmplitude initial_delta_state(std::size_t n, std::size_t x0, std::size_t y0);

} // namespace harper::quantum
