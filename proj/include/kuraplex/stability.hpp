#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kuraplex/composition.hpp"
#include "kuraplex/dynamics.hpp"
#include "kuraplex/eigen.hpp"
#include "kuraplex/kronecker.hpp"

namespace kuraplex {

enum class Stability { stable, unstable, degenerate };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        default: return "degenerate";
    }
}

/// Sorted spectrum of an equilibrium Jacobian plus its stability verdict.
struct SpectrumReport {
    std::vector<double> eigenvalues;  // ascending
    double zero_tolerance = 0.0;
    Stability classification = Stability::degenerate;
    std::size_t zero_multiplicity = 0;

    double max_eigenvalue() const { return eigenvalues.empty() ? 0.0 : eigenvalues.back(); }
};

/// Jacobian of the Kuramoto field for one layer at the state psi:
/// off-diagonal (i, j) = a_ij cos(psi_j - psi_i), diagonal = minus the row's
/// off-diagonal sum. Rows therefore sum to zero and the global-rotation mode
/// is always a zero eigenvalue. At a synchronized state this is minus the
/// graph Laplacian.
inline Matrix jacobian_single_layer(const Matrix& a, const PhaseVector& psi) {
    const std::size_t n = psi.size();
    if (a.rows() != n || a.cols() != n)
        throw std::invalid_argument("jacobian_single_layer: size mismatch");
    Matrix j(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double lambda = 0.0;
        for (std::size_t jx = 0; jx < n; ++jx) {
            if (jx == i) continue;
            const double v = a(i, jx) * std::cos(psi[jx] - psi[i]);
            j(i, jx) = v;
            lambda += v;
        }
        j(i, i) = -lambda;
    }
    return j;
}

/// Jacobian of any Kuramoto network at any state, differentiating the vector
/// field directly: same formula as jacobian_single_layer but taking the full
/// weight matrix. Serves as the independent oracle for the block-structured
/// multiplex Jacobian.
inline Matrix jacobian_direct(const Matrix& weights, const PhaseVector& theta) {
    return jacobian_single_layer(weights, theta);
}

/// Multiplex Jacobian at the composed state built from (psi, phi): the
/// Kronecker sum of the two subsystem Jacobians. Diagonal blocks are
/// J_intra(psi) - c_l I with c_l = sum_k eps_lk cos(phi_k - phi_l);
/// off-diagonal block (l, k) is eps_lk cos(phi_k - phi_l) I.
inline Matrix jacobian_multiplex(const MultiplexSystem& sys, const PhaseVector& psi,
                                 const PhaseVector& phi) {
    sys.validate();
    if (psi.size() != sys.n_nodes() || phi.size() != sys.n_layers())
        throw std::invalid_argument("jacobian_multiplex: state lengths must match system");
    return kronecker_sum(jacobian_single_layer(sys.scaled_intra(), psi),
                         jacobian_single_layer(sys.scaled_inter(), phi));
}

/// All pairwise sums of two spectra, sorted ascending, multiplicities kept.
/// The spectrum of a Kronecker sum is exactly this sumset of the factor
/// spectra.
inline std::vector<double> spectrum_sumset(const std::vector<double>& spec_a,
                                           const std::vector<double>& spec_b) {
    std::vector<double> out;
    out.reserve(spec_a.size() * spec_b.size());
    for (double a : spec_a)
        for (double b : spec_b) out.push_back(a + b);
    std::sort(out.begin(), out.end());
    return out;
}

/// Scale-free default tolerance for deciding which eigenvalues count as the
/// zero mode.
inline double default_zero_tolerance(const std::vector<double>& spectrum) {
    double m = 1.0;
    for (double v : spectrum) m = std::max(m, std::abs(v));
    return 1e-9 * m;
}

/// Classify a Jacobian spectrum: stable when the zero mode is simple and
/// everything else is negative, unstable when any eigenvalue is positive
/// beyond tolerance, degenerate otherwise (extra zero modes). The degenerate
/// class exists because the stable/unstable dichotomy silently assumes a
/// simple zero; extra zeros get reported instead of guessed at.
inline SpectrumReport classify_stability(std::vector<double> spectrum, double zero_tol) {
    if (!(zero_tol > 0.0)) throw std::invalid_argument("classify_stability: zero_tol must be > 0");
    std::sort(spectrum.begin(), spectrum.end());
    SpectrumReport r;
    r.zero_tolerance = zero_tol;
    std::size_t zeros = 0, positives = 0, negatives = 0;
    for (double v : spectrum) {
        if (std::abs(v) <= zero_tol)
            ++zeros;
        else if (v > 0.0)
            ++positives;
        else
            ++negatives;
    }
    r.zero_multiplicity = zeros;
    if (zeros == 1 && positives == 0)
        r.classification = Stability::stable;
    else if (positives > 0)
        r.classification = Stability::unstable;
    else
        r.classification = Stability::degenerate;
    r.eigenvalues = std::move(spectrum);
    return r;
}

/// Stability of a composed equilibrium together with its subsystem verdicts
/// and the sumset cross-check.
struct ComposedStabilityReport {
    SpectrumReport intra;
    SpectrumReport inter;
    SpectrumReport composed;
    /// Largest gap between the assembled Jacobian's spectrum and the sumset
    /// of the subsystem spectra.
    double sumset_residual = 0.0;
    /// True when any of the three spectra has a non-simple zero mode; the
    /// stable-iff-both-stable equivalence is only asserted off this set.
    bool degenerate = false;
    /// composed stable <=> (intra stable and inter stable); meaningful when
    /// !degenerate.
    bool iff_holds = false;
};

/// Check that psi/phi are equilibria (rhs residual below `residual_tol` in
/// max norm, zero frequencies), then classify the subsystem Jacobians and
/// the assembled multiplex Jacobian and test the stable-iff-both-stable
/// equivalence. Throws when handed a non-equilibrium, quoting the residual.
inline ComposedStabilityReport stability_of_composed(const MultiplexSystem& sys,
                                                     const PhaseVector& psi,
                                                     const PhaseVector& phi,
                                                     double zero_tol = 0.0,
                                                     double residual_tol = 1e-8) {
    sys.validate();
    const FrequencyVector zero_n(sys.n_nodes(), 0.0), zero_m(sys.n_layers(), 0.0);
    auto max_abs = [](const PhaseVector& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    };
    const double res_psi = max_abs(kuramoto_rhs(psi, zero_n, sys.scaled_intra()));
    const double res_phi = max_abs(kuramoto_rhs(phi, zero_m, sys.scaled_inter()));
    if (res_psi > residual_tol || res_phi > residual_tol)
        throw std::invalid_argument(
            "stability_of_composed: states are not equilibria (rhs residuals " +
            std::to_string(res_psi) + ", " + std::to_string(res_phi) + " exceed " +
            std::to_string(residual_tol) + ")");

    const Matrix j_intra = jacobian_single_layer(sys.scaled_intra(), psi);
    const Matrix j_inter = jacobian_single_layer(sys.scaled_inter(), phi);
    const Matrix j_full = jacobian_multiplex(sys, psi, phi);

    const auto spec_intra = spectrum_sym(j_intra);
    const auto spec_inter = spectrum_sym(j_inter);
    const auto spec_full = spectrum_sym(j_full);
    const auto sumset = spectrum_sumset(spec_intra, spec_inter);

    ComposedStabilityReport rep;
    rep.sumset_residual = 0.0;
    for (std::size_t i = 0; i < spec_full.size(); ++i)
        rep.sumset_residual = std::max(rep.sumset_residual, std::abs(spec_full[i] - sumset[i]));

    // One shared tolerance keeps "zero" meaning the same thing in all three
    // spectra; otherwise a borderline mode could flip category between the
    // factor and the sum.
    const double tol = zero_tol > 0.0 ? zero_tol : default_zero_tolerance(spec_full);
    rep.intra = classify_stability(spec_intra, tol);
    rep.inter = classify_stability(spec_inter, tol);
    rep.composed = classify_stability(spec_full, tol);
    rep.degenerate = rep.intra.zero_multiplicity != 1 || rep.inter.zero_multiplicity != 1 ||
                     rep.composed.zero_multiplicity != 1;
    const bool both_stable = rep.intra.classification == Stability::stable &&
                             rep.inter.classification == Stability::stable;
    rep.iff_holds = (rep.composed.classification == Stability::stable) == both_stable;
    return rep;
}

}  // namespace kuraplex
