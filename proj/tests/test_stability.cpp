#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "kuraplex/composition.hpp"
#include "kuraplex/graphs.hpp"
#include "kuraplex/rng.hpp"
#include "kuraplex/stability.hpp"

using namespace kuraplex;

namespace {

PhaseVector random_phases(std::size_t n, SplitMix64& rng) {
    PhaseVector v(n);
    for (double& x : v) x = rng.uniform(-kPi, kPi);
    return v;
}

MultiplexSystem make_system(const Matrix& intra, const Matrix& inter, double ea, double ee) {
    MultiplexSystem sys;
    sys.intra = intra;
    sys.inter = inter;
    sys.eps_intra = ea;
    sys.eps_inter = ee;
    sys.omega_intra.assign(intra.rows(), 0.0);
    sys.omega_inter.assign(inter.rows(), 0.0);
    return sys;
}

Matrix laplacian(const Matrix& a) {
    Matrix l(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double deg = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            l(i, j) = -a(i, j);
            deg += a(i, j);
        }
        l(i, i) = deg;
    }
    return l;
}

}  // namespace

TEST_CASE("jacobian at a synchronized state is minus the laplacian") {
    SplitMix64 rng(41);
    const Matrix a = gen_erdos_renyi(10, 0.4, rng);
    const Matrix j = jacobian_single_layer(a, PhaseVector(10, 0.77));
    const Matrix l = laplacian(a);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t k = 0; k < 10; ++k)
            REQUIRE(j(i, k) == Catch::Approx(-l(i, k)).margin(1e-13));
}

TEST_CASE("jacobian of the 3-ring twisted state") {
    // J = (3/2) I - (1/2) ones, eigenvalues {0, 3/2, 3/2}: the twisted state
    // on three oscillators is unstable.
    const Matrix j = jacobian_single_layer(gen_ring(3), twisted_state(3, 1));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t k = 0; k < 3; ++k) {
            const double expected = i == k ? 1.0 : -0.5;
            REQUIRE(j(i, k) == Catch::Approx(expected).margin(1e-14));
        }
    const auto spec = spectrum_sym(j);
    REQUIRE(spec[0] == Catch::Approx(0.0).margin(1e-10));
    REQUIRE(spec[1] == Catch::Approx(1.5).margin(1e-10));
    REQUIRE(spec[2] == Catch::Approx(1.5).margin(1e-10));
    REQUIRE(classify_stability(spec, 1e-9).classification == Stability::unstable);
}

TEST_CASE("two nodes a quarter turn apart give a zero jacobian") {
    const Matrix edge = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    const Matrix j = jacobian_single_layer(edge, {0.0, kPi / 2.0});
    REQUIRE(j.max_abs() < 1e-15);
}

TEST_CASE("jacobian rows sum to zero and the matrix is symmetric") {
    SplitMix64 rng(43);
    const Matrix a = gen_erdos_renyi(15, 0.4, rng);
    const Matrix j = jacobian_single_layer(a, random_phases(15, rng));
    for (double s : j.row_sums()) REQUIRE(std::abs(s) < 1e-10);
    REQUIRE(j.symmetry_defect() < 1e-12);
}

TEST_CASE("jacobian_direct equals jacobian_single_layer on one layer") {
    SplitMix64 rng(44);
    const Matrix a = gen_ring(9);
    const PhaseVector psi = random_phases(9, rng);
    REQUIRE(max_abs_diff(jacobian_direct(a, psi), jacobian_single_layer(a, psi)) == 0.0);
}

TEST_CASE("multiplex jacobian at synchronized states is minus the assembled laplacian") {
    SplitMix64 rng(40);
    const MultiplexSystem sys = make_system(gen_erdos_renyi(6, 0.5, rng), gen_ring(3), 1.5, 0.5);
    const auto [weights, omega] = assemble_multiplex(sys);
    const Matrix j = jacobian_multiplex(sys, PhaseVector(6, 0.2), PhaseVector(3, 0.2));
    const Matrix l = laplacian(weights);
    for (std::size_t i = 0; i < j.rows(); ++i)
        for (std::size_t k = 0; k < j.cols(); ++k)
            REQUIRE(j(i, k) == Catch::Approx(-l(i, k)).margin(1e-13));
}

TEST_CASE("jacobian_multiplex agrees with the direct oracle at composed states") {
    SplitMix64 rng(45);
    for (int trial = 0; trial < 5; ++trial) {
        const MultiplexSystem sys = make_system(gen_erdos_renyi(7, 0.5, rng), gen_ring(4),
                                                rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0));
        const PhaseVector psi = random_phases(7, rng);
        const PhaseVector phi = random_phases(4, rng);
        const auto [weights, omega] = assemble_multiplex(sys);
        const Matrix block = jacobian_multiplex(sys, psi, phi);
        const Matrix direct = jacobian_direct(weights, compose_state(psi, phi));
        REQUIRE(max_abs_diff(block, direct) <= 1e-12);
    }
}

TEST_CASE("jacobian_direct matches central finite differences of the rhs") {
    SplitMix64 rng(46);
    const Matrix w = gen_erdos_renyi(6, 0.6, rng);
    const PhaseVector theta = random_phases(6, rng);
    const FrequencyVector zero(6, 0.0);
    const Matrix j = jacobian_direct(w, theta);
    const double h = 1e-6;
    for (std::size_t col = 0; col < 6; ++col) {
        PhaseVector plus = theta, minus = theta;
        plus[col] += h;
        minus[col] -= h;
        const auto fp = kuramoto_rhs(plus, zero, w);
        const auto fm = kuramoto_rhs(minus, zero, w);
        for (std::size_t row = 0; row < 6; ++row)
            REQUIRE(j(row, col) == Catch::Approx((fp[row] - fm[row]) / (2.0 * h)).margin(1e-6));
    }
}

TEST_CASE("multiplex twisted spectrum is the sumset of two 3-ring spectra") {
    const MultiplexSystem sys = make_system(gen_ring(3), gen_ring(3), 1.0, 1.0);
    const auto spec = spectrum_sym(jacobian_multiplex(sys, twisted_state(3, 1),
                                                      twisted_state(3, 1)));
    const std::vector<double> expected{0.0, 1.5, 1.5, 1.5, 1.5, 3.0, 3.0, 3.0, 3.0};
    REQUIRE(spec.size() == expected.size());
    for (std::size_t i = 0; i < spec.size(); ++i)
        REQUIRE(spec[i] == Catch::Approx(expected[i]).margin(1e-8));
}

TEST_CASE("spectrum_sumset definition") {
    REQUIRE(spectrum_sumset({-1.0, 0.0}, {-2.0, 0.0}) ==
            std::vector<double>{-3.0, -2.0, -1.0, 0.0});
    REQUIRE(spectrum_sumset({0.0}, {4.0, -1.0, 2.0}) == std::vector<double>{-1.0, 2.0, 4.0});
    REQUIRE(spectrum_sumset({}, {1.0}).empty());
}

TEST_CASE("sumset matches the assembled jacobian spectrum on random equilibria") {
    SplitMix64 rng(47);
    for (int trial = 0; trial < 5; ++trial) {
        const MultiplexSystem sys =
            make_system(gen_circulant(10, 2), gen_ring(4), rng.uniform(0.3, 1.5),
                        rng.uniform(0.3, 1.5));
        const PhaseVector psi = twisted_state(10, 1 + trial % 3);
        const PhaseVector phi = twisted_state(4, trial % 2);
        const auto assembled = spectrum_sym(jacobian_multiplex(sys, psi, phi));
        const auto sum = spectrum_sumset(
            spectrum_sym(jacobian_single_layer(sys.scaled_intra(), psi)),
            spectrum_sym(jacobian_single_layer(sys.scaled_inter(), phi)));
        for (std::size_t i = 0; i < assembled.size(); ++i)
            REQUIRE(assembled[i] == Catch::Approx(sum[i]).margin(1e-8));
    }
}

TEST_CASE("classify_stability rules") {
    REQUIRE(classify_stability({0.0, -1.0, -2.0}, 1e-9).classification == Stability::stable);
    REQUIRE(classify_stability({0.0, 1.5, 1.5}, 1e-9).classification == Stability::unstable);
    REQUIRE(classify_stability({0.0, 0.0, -1.0}, 1e-9).classification == Stability::degenerate);

    const auto rep = classify_stability({-3.0, -1e-12, 2e-9}, 1e-9);
    REQUIRE(rep.zero_multiplicity == 1);
    REQUIRE(rep.classification == Stability::unstable);
    REQUIRE_THROWS_AS(classify_stability({0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("stability of composed synchronized states") {
    SplitMix64 rng(48);
    const MultiplexSystem sys = make_system(gen_erdos_renyi(8, 0.6, rng), gen_ring(3), 1.0, 0.5);
    const auto rep = stability_of_composed(sys, PhaseVector(8, 0.0), PhaseVector(3, 0.0));
    REQUIRE(rep.intra.classification == Stability::stable);
    REQUIRE(rep.inter.classification == Stability::stable);
    REQUIRE(rep.composed.classification == Stability::stable);
    REQUIRE(rep.iff_holds);
    REQUIRE_FALSE(rep.degenerate);
    REQUIRE(rep.sumset_residual < 1e-8);
}

TEST_CASE("stable intra with unstable inter makes the composed state unstable") {
    // The fig-5 equilibrium pair: 2-twist on circulant(100, 10) is stable,
    // the 1-twist on the 3-ring is not, so perturbed runs leave the state.
    const MultiplexSystem sys = make_system(gen_circulant(100, 10), gen_ring(3), 1.0, 1.0);
    const auto rep = stability_of_composed(sys, twisted_state(100, 2), twisted_state(3, 1));
    REQUIRE(rep.intra.classification == Stability::stable);
    REQUIRE(rep.inter.classification == Stability::unstable);
    REQUIRE(rep.composed.classification == Stability::unstable);
    REQUIRE(rep.iff_holds);
}

TEST_CASE("non-equilibrium states are rejected with a residual diagnostic") {
    SplitMix64 rng(49);
    const MultiplexSystem sys = make_system(gen_ring(6), gen_ring(3), 1.0, 1.0);
    const PhaseVector bad = random_phases(6, rng);
    REQUIRE_THROWS_WITH(stability_of_composed(sys, bad, twisted_state(3, 0)),
                        Catch::Matchers::ContainsSubstring("not equilibria"));
}

TEST_CASE("degenerate zero modes are flagged, not asserted") {
    // 1-twist on the 4-ring: cos(pi/2) = 0 kills the inter jacobian entirely,
    // leaving a 4-fold zero mode.
    const MultiplexSystem sys = make_system(gen_ring(6), gen_ring(4), 1.0, 1.0);
    const auto rep = stability_of_composed(sys, PhaseVector(6, 0.0), twisted_state(4, 1));
    REQUIRE(rep.inter.zero_multiplicity == 4);
    REQUIRE(rep.degenerate);
}
