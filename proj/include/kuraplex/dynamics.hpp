#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kuraplex/kronecker.hpp"
#include "kuraplex/matrix.hpp"

namespace kuraplex {

using PhaseVector = std::vector<double>;
using FrequencyVector = std::vector<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Map an angle to [-pi, pi). IEEE remainder is exact, so repeated wrapping
/// is idempotent.
inline double wrap_phase(double x) {
    double r = std::remainder(x, kTwoPi);
    if (r >= kPi) r -= kTwoPi;  // remainder may return +pi
    return r;
}

inline void wrap_phases(PhaseVector& v) {
    for (double& x : v) x = wrap_phase(x);
}

/// Thrown when an integration step produces a non-finite phase.
struct DivergenceError : std::runtime_error {
    DivergenceError(std::size_t step_index, std::size_t component)
        : std::runtime_error("non-finite phase at step " + std::to_string(step_index) +
                             ", component " + std::to_string(component)),
          step(step_index),
          comp(component) {}
    std::size_t step;
    std::size_t comp;
};

/// Kuramoto vector field: out_i = omega_i + sum_j w_ij sin(theta_j - theta_i).
/// Terms are accumulated in ascending j with zero weights skipped; the
/// compiled evaluator below reproduces this order bit for bit, which the
/// determinism contract (identical inputs -> identical trajectories) relies
/// on.
inline PhaseVector kuramoto_rhs(const PhaseVector& theta, const FrequencyVector& omega,
                                const Matrix& weights) {
    const std::size_t n = theta.size();
    if (omega.size() != n || weights.rows() != n || weights.cols() != n)
        throw std::invalid_argument("kuramoto_rhs: size mismatch");
    PhaseVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = theta[i];
        const double* w = weights.row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (w[j] != 0.0) acc += w[j] * std::sin(theta[j] - ti);
        }
        out[i] = omega[i] + acc;
    }
    return out;
}

/// Frequencies plus couplings compiled to compressed sparse rows. Adjacency
/// matrices here are mostly zeros, so integration walks the explicit edge
/// list instead of the dense rows. Evaluation order matches kuramoto_rhs
/// exactly.
class KuramotoNetwork {
public:
    KuramotoNetwork(FrequencyVector omega, const Matrix& weights)
        : omega_(std::move(omega)) {
        const std::size_t n = omega_.size();
        if (weights.rows() != n || weights.cols() != n)
            throw std::invalid_argument("KuramotoNetwork: size mismatch");
        row_ptr_.reserve(n + 1);
        row_ptr_.push_back(0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* w = weights.row(i);
            for (std::size_t j = 0; j < n; ++j)
                if (w[j] != 0.0) {
                    col_.push_back(static_cast<std::uint32_t>(j));
                    w_.push_back(w[j]);
                }
            row_ptr_.push_back(col_.size());
        }
    }

    std::size_t size() const { return omega_.size(); }

    void rhs(const double* theta, double* out) const {
        const std::size_t n = omega_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double ti = theta[i];
            double acc = 0.0;
            for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
                acc += w_[k] * std::sin(theta[col_[k]] - ti);
            out[i] = omega_[i] + acc;
        }
    }

    /// One explicit Euler step in place: theta_i += dt * rhs_i.
    void euler_step(PhaseVector& theta, PhaseVector& scratch) const {
        if (scratch.size() != theta.size()) scratch.resize(theta.size());
        rhs(theta.data(), scratch.data());
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = theta[i] + dt_ * scratch[i];
    }

    void set_dt(double dt) { dt_ = dt; }
    double dt() const { return dt_; }

private:
    FrequencyVector omega_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::uint32_t> col_;
    std::vector<double> w_;
    double dt_ = 1e-3;
};

/// A multiplex system: N-node intra-layer coupling, M-layer inter-layer
/// coupling, the two scalar coupling strengths, and the natural frequencies
/// of both subsystems. Node i of layer l has natural frequency
/// omega_intra[i] + omega_inter[l]; this additive split is what makes the
/// composed-solution identity carry over unchanged when frequencies are
/// nonzero.
struct MultiplexSystem {
    Matrix intra;   // N x N, symmetric, zero diagonal
    Matrix inter;   // M x M, symmetric, zero diagonal
    double eps_intra = 1.0;
    double eps_inter = 1.0;
    FrequencyVector omega_intra;  // length N
    FrequencyVector omega_inter;  // length M

    std::size_t n_nodes() const { return intra.rows(); }
    std::size_t n_layers() const { return inter.rows(); }

    Matrix scaled_intra() const { return eps_intra * intra; }
    Matrix scaled_inter() const { return eps_inter * inter; }

    void validate() const {
        if (!intra.is_square() || !inter.is_square())
            throw std::invalid_argument("MultiplexSystem: coupling matrices must be square");
        if (!intra.is_symmetric() || !inter.is_symmetric())
            throw std::invalid_argument("MultiplexSystem: coupling matrices must be symmetric");
        for (std::size_t i = 0; i < intra.rows(); ++i)
            if (intra(i, i) != 0.0)
                throw std::invalid_argument("MultiplexSystem: intra diagonal must be zero");
        for (std::size_t l = 0; l < inter.rows(); ++l)
            if (inter(l, l) != 0.0)
                throw std::invalid_argument("MultiplexSystem: inter diagonal must be zero");
        if (omega_intra.size() != n_nodes() || omega_inter.size() != n_layers())
            throw std::invalid_argument("MultiplexSystem: frequency lengths must match");
        if (!std::isfinite(eps_intra) || !std::isfinite(eps_inter))
            throw std::invalid_argument("MultiplexSystem: couplings must be finite");
    }
};

/// Merge a multiplex system into one NM-oscillator network: the coupling
/// matrix is the Kronecker sum of the scaled intra and inter matrices
/// (diagonal blocks eps_intra * A_intra, off-diagonal blocks eps_lk * I_N)
/// and the frequency of node i in layer l is omega_intra[i] + omega_inter[l],
/// in layer-major order.
inline std::pair<Matrix, FrequencyVector> assemble_multiplex(const MultiplexSystem& sys) {
    sys.validate();
    const std::size_t n = sys.n_nodes(), m = sys.n_layers();
    Matrix weights = kronecker_sum(sys.scaled_intra(), sys.scaled_inter());
    FrequencyVector omega(n * m);
    for (std::size_t l = 0; l < m; ++l)
        for (std::size_t i = 0; i < n; ++i)
            omega[l * n + i] = sys.omega_intra[i] + sys.omega_inter[l];
    return {std::move(weights), std::move(omega)};
}

/// Time-sampled phases (stored unwrapped; wrapping is a presentation
/// concern) plus the run parameters needed to reproduce them.
struct Trajectory {
    std::vector<double> times;
    std::vector<PhaseVector> states;
    double dt = 0.0;
    std::size_t record_every = 1;
    std::string scenario;
    std::uint64_t seed = 0;

    const PhaseVector& final_state() const { return states.back(); }
};

namespace detail {

inline void check_finite(const PhaseVector& theta, std::size_t step) {
    for (std::size_t i = 0; i < theta.size(); ++i)
        if (!std::isfinite(theta[i])) throw DivergenceError(step, i);
}

template <class Stepper>
Trajectory integrate_fixed_step(const PhaseVector& theta0, const FrequencyVector& omega,
                                const Matrix& weights, double dt, std::size_t n_steps,
                                std::size_t record_every, Stepper&& step_fn) {
    const std::size_t n = theta0.size();
    if (omega.size() != n || weights.rows() != n || weights.cols() != n)
        throw std::invalid_argument("integrate: size mismatch");
    if (!(dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
    if (n_steps < 1) throw std::invalid_argument("integrate: n_steps must be >= 1");
    if (record_every < 1) throw std::invalid_argument("integrate: record_every must be >= 1");

    KuramotoNetwork net(omega, weights);
    net.set_dt(dt);
    PhaseVector theta = theta0;
    detail::check_finite(theta, 0);

    Trajectory traj;
    traj.dt = dt;
    traj.record_every = record_every;
    traj.times.push_back(0.0);
    traj.states.push_back(theta);
    for (std::size_t step = 1; step <= n_steps; ++step) {
        step_fn(net, theta);
        detail::check_finite(theta, step);
        if (step % record_every == 0 || step == n_steps) {
            traj.times.push_back(static_cast<double>(step) * dt);
            traj.states.push_back(theta);
        }
    }
    return traj;
}

}  // namespace detail

/// Explicit Euler with fixed step (the reference scheme): theta_{k+1} =
/// theta_k + dt * rhs(theta_k). Records step 0, every record_every-th step
/// and the final step.
inline Trajectory integrate_euler(const PhaseVector& theta0, const FrequencyVector& omega,
                                  const Matrix& weights, double dt, std::size_t n_steps,
                                  std::size_t record_every = 1) {
    return detail::integrate_fixed_step(
        theta0, omega, weights, dt, n_steps, record_every,
        [scratch = PhaseVector(theta0.size())](const KuramotoNetwork& net,
                                               PhaseVector& theta) mutable {
            net.euler_step(theta, scratch);
        });
}

/// Classical fixed-step RK4. Not the reference scheme; it exists to bound
/// the Euler discretization error in tests and verification runs.
inline Trajectory integrate_rk4(const PhaseVector& theta0, const FrequencyVector& omega,
                                const Matrix& weights, double dt, std::size_t n_steps,
                                std::size_t record_every = 1) {
    const std::size_t n = theta0.size();
    struct Rk4Scratch {
        PhaseVector k1, k2, k3, k4, tmp;
        explicit Rk4Scratch(std::size_t n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
    };
    return detail::integrate_fixed_step(
        theta0, omega, weights, dt, n_steps, record_every,
        [s = Rk4Scratch(n), dt](const KuramotoNetwork& net, PhaseVector& theta) mutable {
            const std::size_t n = theta.size();
            net.rhs(theta.data(), s.k1.data());
            for (std::size_t i = 0; i < n; ++i) s.tmp[i] = theta[i] + 0.5 * dt * s.k1[i];
            net.rhs(s.tmp.data(), s.k2.data());
            for (std::size_t i = 0; i < n; ++i) s.tmp[i] = theta[i] + 0.5 * dt * s.k2[i];
            net.rhs(s.tmp.data(), s.k3.data());
            for (std::size_t i = 0; i < n; ++i) s.tmp[i] = theta[i] + dt * s.k3[i];
            net.rhs(s.tmp.data(), s.k4.data());
            for (std::size_t i = 0; i < n; ++i)
                theta[i] = theta[i] +
                           (dt / 6.0) * (s.k1[i] + 2.0 * s.k2[i] + 2.0 * s.k3[i] + s.k4[i]);
        });
}

}  // namespace kuraplex
