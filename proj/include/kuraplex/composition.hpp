#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kuraplex/dynamics.hpp"
#include "kuraplex/rng.hpp"

namespace kuraplex {

/// Build the multiplex state from subsystem states: entry l*N + i is
/// psi[i] + phi[l] (layer-major, matching the assembled system's ordering).
/// If psi and phi solve the intra- and inter-layer systems, the composed
/// vector solves the full multiplex system.
inline PhaseVector compose_state(const PhaseVector& psi, const PhaseVector& phi) {
    PhaseVector theta(psi.size() * phi.size());
    std::size_t k = 0;
    for (double pl : phi)
        for (double ps : psi) theta[k++] = ps + pl;
    return theta;
}

/// Kuramoto order parameter R = |sum_j exp(i theta_j)| / n in [0, 1].
/// R = 1 is phase synchronization; incoherent states give residual values.
inline double order_parameter(const PhaseVector& theta) {
    if (theta.empty()) throw std::invalid_argument("order_parameter: empty state");
    double cx = 0.0, sy = 0.0;
    for (double t : theta) {
        cx += std::cos(t);
        sy += std::sin(t);
    }
    const double r = std::hypot(cx, sy) / static_cast<double>(theta.size());
    return r > 1.0 ? 1.0 : r;
}

/// Order parameter of the composed state via the factorization
/// R(compose(psi, phi)) = R(psi) * R(phi): the NM phasor sum splits into the
/// product of the two subsystem phasor sums.
inline double order_parameter_product(const PhaseVector& psi, const PhaseVector& phi) {
    return order_parameter(psi) * order_parameter(phi);
}

/// Twisted state on n oscillators: entry j is -2*pi*p*j/n wrapped to
/// [-pi, pi). p = 0 is phase synchronization; 1 <= p <= n/2 are the distinct
/// phase-locked windings (larger p aliases to n - p up to reflection).
/// These are equilibria of any circulant coupling.
inline PhaseVector twisted_state(std::size_t n, long p) {
    if (n < 1) throw std::invalid_argument("twisted_state: n must be >= 1");
    PhaseVector out(n);
    for (std::size_t j = 0; j < n; ++j)
        out[j] = wrap_phase(-(kTwoPi * static_cast<double>(p) * static_cast<double>(j)) /
                            static_cast<double>(n));
    return out;
}

/// Add an independent eta * U(-pi, pi) draw to each entry, then wrap the
/// whole pattern to [-pi, pi). One draw is consumed per entry regardless of
/// eta, so seeded runs stay aligned.
inline PhaseVector perturb(const PhaseVector& state, double eta, SplitMix64& rng) {
    if (eta < 0.0) throw std::invalid_argument("perturb: eta must be >= 0");
    PhaseVector out(state.size());
    for (std::size_t i = 0; i < state.size(); ++i)
        out[i] = wrap_phase(state[i] + eta * rng.uniform(-kPi, kPi));
    return out;
}

/// Integrate the assembled NM-system from compose(psi0, phi0) and the two
/// subsystems separately (Euler, lockstep), and return the largest
/// |theta_full - (psi_i + phi_l)| seen over all steps and components. Exact
/// composition makes this zero in real arithmetic; in floating point it
/// stays at rounding scale unless the trajectory is dynamically unstable.
inline double composition_residual(const MultiplexSystem& sys, const PhaseVector& psi0,
                                   const PhaseVector& phi0, double dt, std::size_t n_steps) {
    sys.validate();
    if (psi0.size() != sys.n_nodes() || phi0.size() != sys.n_layers())
        throw std::invalid_argument("composition_residual: state lengths must match system");
    auto [weights, omega] = assemble_multiplex(sys);

    KuramotoNetwork full(omega, weights);
    KuramotoNetwork intra(sys.omega_intra, sys.scaled_intra());
    KuramotoNetwork inter(sys.omega_inter, sys.scaled_inter());
    full.set_dt(dt);
    intra.set_dt(dt);
    inter.set_dt(dt);

    PhaseVector theta = compose_state(psi0, phi0);
    PhaseVector psi = psi0, phi = phi0;
    PhaseVector s_full(theta.size()), s_psi(psi.size()), s_phi(phi.size());

    const std::size_t n = psi.size(), m = phi.size();
    double residual = 0.0;
    for (std::size_t step = 0; step <= n_steps; ++step) {
        for (std::size_t l = 0; l < m; ++l)
            for (std::size_t i = 0; i < n; ++i) {
                const double d = std::abs(theta[l * n + i] - (psi[i] + phi[l]));
                if (d > residual) residual = d;
            }
        if (step == n_steps) break;
        full.euler_step(theta, s_full);
        intra.euler_step(psi, s_psi);
        inter.euler_step(phi, s_phi);
        detail::check_finite(theta, step + 1);
    }
    return residual;
}

/// The four synchronization curves of a composed run: R of the full
/// trajectory, the product R_intra * R_inter, and the two subsystem curves.
struct OrderParameterSeries {
    std::vector<double> times;
    std::vector<double> r_full;
    std::vector<double> r_composed;
    std::vector<double> r_intra;
    std::vector<double> r_inter;
};

/// Evaluate the order-parameter curves from a full-system trajectory and the
/// matching subsystem trajectories (all sampled on the same grid).
inline OrderParameterSeries order_parameter_series(const Trajectory& full,
                                                   const Trajectory& intra,
                                                   const Trajectory& inter) {
    if (full.times.size() != intra.times.size() || full.times.size() != inter.times.size())
        throw std::invalid_argument("order_parameter_series: trajectories not on one grid");
    OrderParameterSeries s;
    s.times = full.times;
    const std::size_t k = full.times.size();
    s.r_full.reserve(k);
    s.r_composed.reserve(k);
    s.r_intra.reserve(k);
    s.r_inter.reserve(k);
    for (std::size_t t = 0; t < k; ++t) {
        const double ri = order_parameter(intra.states[t]);
        const double re = order_parameter(inter.states[t]);
        s.r_full.push_back(order_parameter(full.states[t]));
        s.r_composed.push_back(ri * re);
        s.r_intra.push_back(ri);
        s.r_inter.push_back(re);
    }
    return s;
}

}  // namespace kuraplex
