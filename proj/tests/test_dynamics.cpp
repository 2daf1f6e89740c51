#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "kuraplex/composition.hpp"
#include "kuraplex/dynamics.hpp"
#include "kuraplex/graphs.hpp"
#include "kuraplex/rng.hpp"

using namespace kuraplex;

namespace {

MultiplexSystem small_system() {
    MultiplexSystem sys;
    sys.intra = gen_ring(4);
    sys.inter = gen_ring(3);
    sys.eps_intra = 1.25;
    sys.eps_inter = 0.5;
    sys.omega_intra.assign(4, 0.0);
    sys.omega_inter.assign(3, 0.0);
    return sys;
}

PhaseVector random_phases(std::size_t n, SplitMix64& rng) {
    PhaseVector v(n);
    for (double& x : v) x = rng.uniform(-kPi, kPi);
    return v;
}

}  // namespace

TEST_CASE("wrap_phase maps to [-pi, pi)") {
    REQUIRE(wrap_phase(kPi) == -kPi);
    REQUIRE(wrap_phase(0.0) == 0.0);
    REQUIRE(wrap_phase(3.0 * kPi / 2.0) == Catch::Approx(-kPi / 2.0).margin(1e-15));
    REQUIRE(wrap_phase(-kPi) == -kPi);
    for (double x : {-100.0, -7.5, 0.1, 9.0, 1234.5}) {
        const double w = wrap_phase(x);
        REQUIRE(w >= -kPi);
        REQUIRE(w < kPi);
        REQUIRE(std::remainder(w - x, kTwoPi) == Catch::Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("kuramoto rhs hand-evaluated cases") {
    // equal phases, zero frequency: every sine vanishes
    const Matrix w = gen_complete(4);
    const PhaseVector same(4, 0.7);
    const FrequencyVector zero(4, 0.0);
    for (double v : kuramoto_rhs(same, zero, w)) REQUIRE(v == 0.0);

    // two nodes at (0, pi/2): rhs = (sin(pi/2), sin(-pi/2)) = (1, -1)
    const Matrix edge = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    const auto r = kuramoto_rhs({0.0, kPi / 2.0}, {0.0, 0.0}, edge);
    REQUIRE(r[0] == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(r[1] == Catch::Approx(-1.0).margin(1e-15));

    // zero coupling: rhs is the frequency vector
    SplitMix64 rng(3);
    const PhaseVector any = random_phases(3, rng);
    const auto drift = kuramoto_rhs(any, {2.5, 2.5, 2.5}, Matrix(3, 3));
    REQUIRE(drift == FrequencyVector{2.5, 2.5, 2.5});

    REQUIRE_THROWS_AS(kuramoto_rhs({0.0}, {0.0, 0.0}, Matrix(1, 1)), std::invalid_argument);
}

TEST_CASE("compiled network rhs is bit-identical to kuramoto_rhs") {
    SplitMix64 rng(17);
    Matrix w(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            if (i != j && rng.bernoulli(0.6)) w(i, j) = rng.uniform(-1.0, 1.0);
    FrequencyVector omega(6);
    for (double& v : omega) v = rng.uniform(-2.0, 2.0);
    const PhaseVector theta = random_phases(6, rng);

    const auto reference = kuramoto_rhs(theta, omega, w);
    KuramotoNetwork net(omega, w);
    PhaseVector out(6);
    net.rhs(theta.data(), out.data());
    REQUIRE(out == reference);
}

TEST_CASE("euler integrates pure drift exactly") {
    const PhaseVector theta0(5, 0.25);
    const FrequencyVector omega(5, 1.0);
    const auto traj = integrate_euler(theta0, omega, Matrix(5, 5), 0.1, 10, 2);
    REQUIRE(traj.times.front() == 0.0);
    REQUIRE(traj.times.back() == Catch::Approx(1.0));
    for (double v : traj.final_state()) REQUIRE(v == Catch::Approx(1.25).margin(1e-15));
    // recorded: steps 0,2,4,6,8,10
    REQUIRE(traj.times.size() == 6);
}

TEST_CASE("equilibrium stays bitwise constant under euler") {
    const Matrix w = gen_ring(6);
    const PhaseVector sync(6, 1.234567);
    const FrequencyVector zero(6, 0.0);
    const auto traj = integrate_euler(sync, zero, w, 1e-3, 500, 100);
    for (const auto& state : traj.states) REQUIRE(state == sync);
}

TEST_CASE("rk4 is exact for constant rhs and constant at equilibrium") {
    const PhaseVector theta0(3, -0.5);
    const FrequencyVector omega(3, 2.0);
    const auto traj = integrate_rk4(theta0, omega, Matrix(3, 3), 0.25, 8, 8);
    for (double v : traj.final_state()) REQUIRE(v == Catch::Approx(3.5).margin(1e-14));

    const Matrix w = gen_ring(5);
    const PhaseVector sync(5, 0.3);
    const auto eq = integrate_rk4(sync, FrequencyVector(5, 0.0), w, 1e-2, 100, 100);
    for (double v : eq.final_state()) REQUIRE(v == Catch::Approx(0.3).margin(1e-15));
}

TEST_CASE("assemble_multiplex matches the merged matrix layout") {
    MultiplexSystem sys = small_system();
    sys.intra = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    sys.inter = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    sys.eps_intra = 1.0;
    sys.eps_inter = 1.0;
    sys.omega_intra = {0.5, 1.5};
    sys.omega_inter = {10.0, 20.0};
    const auto [weights, omega] = assemble_multiplex(sys);
    const Matrix expected = Matrix::from_rows({{0.0, 1.0, 1.0, 0.0},
                                               {1.0, 0.0, 0.0, 1.0},
                                               {1.0, 0.0, 0.0, 1.0},
                                               {0.0, 1.0, 1.0, 0.0}});
    REQUIRE(weights == expected);
    // layer-major frequency layout: node i of layer l gets intra_i + inter_l
    REQUIRE(omega == FrequencyVector{10.5, 11.5, 20.5, 21.5});
}

TEST_CASE("assemble_multiplex scales couplings into the blocks") {
    MultiplexSystem sys = small_system();
    const auto [weights, omega] = assemble_multiplex(sys);
    REQUIRE(weights(0, 1) == 1.25);       // intra edge scaled by eps_intra
    REQUIRE(weights(0, 4) == 0.5);        // inter edge scaled by eps_inter
    REQUIRE(weights.rows() == 12);
    for (double v : omega) REQUIRE(v == 0.0);
}

TEST_CASE("zero-sum property for symmetric couplings holds along trajectories") {
    SplitMix64 rng(23);
    const Matrix w = gen_erdos_renyi(40, 0.3, rng);
    const FrequencyVector zero(40, 0.0);
    const auto traj = integrate_euler(random_phases(40, rng), zero, w, 1e-2, 100, 10);
    for (const auto& state : traj.states) {
        const auto r = kuramoto_rhs(state, zero, w);
        double sum = 0.0;
        for (double v : r) sum += v;
        REQUIRE(std::abs(sum) < 1e-10 * 40);
    }
}

TEST_CASE("rhs is invariant under global phase shifts") {
    SplitMix64 rng(29);
    const Matrix w = gen_erdos_renyi(12, 0.5, rng);
    const FrequencyVector omega(12, 0.0);
    PhaseVector theta = random_phases(12, rng);
    const auto base = kuramoto_rhs(theta, omega, w);

    PhaseVector shifted = theta;
    for (double& v : shifted) v += 0.37;
    const auto moved = kuramoto_rhs(shifted, omega, w);
    for (std::size_t i = 0; i < 12; ++i)
        REQUIRE(moved[i] == Catch::Approx(base[i]).margin(1e-12));
}

TEST_CASE("shifted initial conditions give shifted trajectories") {
    SplitMix64 rng(31);
    const Matrix w = gen_ring(8);
    const FrequencyVector omega(8, 0.0);
    const PhaseVector theta0 = random_phases(8, rng);
    PhaseVector shifted0 = theta0;
    for (double& v : shifted0) v += 0.25;

    const auto a = integrate_euler(theta0, omega, w, 1e-3, 2000, 2000);
    const auto b = integrate_euler(shifted0, omega, w, 1e-3, 2000, 2000);
    for (std::size_t i = 0; i < 8; ++i)
        REQUIRE(b.final_state()[i] - a.final_state()[i] ==
                Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("divergence aborts with the failing step index") {
    // A coupling this large blows up within a few Euler steps.
    Matrix w(2, 2);
    w(0, 1) = w(1, 0) = 1e308;
    try {
        integrate_euler({0.0, 1.0}, {0.0, 0.0}, w, 1e300, 10, 1);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        REQUIRE(e.step >= 1);
        REQUIRE(std::string(e.what()).find("step") != std::string::npos);
    }
}

TEST_CASE("integration argument validation") {
    const PhaseVector t0(3, 0.0);
    const FrequencyVector om(3, 0.0);
    REQUIRE_THROWS_AS(integrate_euler(t0, om, Matrix(3, 3), 0.0, 5, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(integrate_euler(t0, om, Matrix(3, 3), 0.1, 0, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(integrate_euler(t0, om, Matrix(4, 4), 0.1, 5, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(integrate_euler(t0, om, Matrix(3, 3), 0.1, 5, 0), std::invalid_argument);
}

TEST_CASE("trajectory recording grid") {
    const auto traj = integrate_euler(PhaseVector(2, 0.0), FrequencyVector(2, 1.0),
                                      Matrix(2, 2), 0.5, 7, 3);
    // steps 0, 3, 6 and the final step 7
    REQUIRE(traj.times == std::vector<double>{0.0, 1.5, 3.0, 3.5});
}
