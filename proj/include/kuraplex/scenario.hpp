#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kuraplex/composition.hpp"
#include "kuraplex/dynamics.hpp"
#include "kuraplex/graphs.hpp"
#include "kuraplex/io.hpp"
#include "kuraplex/stability.hpp"

namespace kuraplex {

/// Configuration error that names the offending field, so callers can emit
/// machine-readable diagnostics.
struct ConfigError : std::runtime_error {
    ConfigError(std::string field_name, const std::string& message)
        : std::runtime_error(field_name + ": " + message), field(std::move(field_name)) {}
    std::string field;
};

struct GraphSpec {
    enum class Kind { erdos_renyi, ring, circulant, complete };
    Kind kind = Kind::ring;
    double p = 0.25;              // erdos_renyi only
    std::size_t half_width = 1;   // circulant only
};

struct FrequencySpec {
    enum class Kind { zero, uniform, per_layer };
    Kind kind = Kind::zero;
    double value = 0.0;              // uniform: every oscillator gets this
    std::vector<double> per_layer;   // per_layer: one entry per layer
};

struct InitSpec {
    enum class Kind { random_composed, twisted };
    Kind kind = Kind::random_composed;
    long p_intra = 0;
    long p_inter = 0;
};

struct PerturbationSpec {
    enum class Kind { none, inter, intra, both };
    Kind kind = Kind::none;
    double eta = 0.025;
};

/// Everything needed to reproduce one simulation run bit for bit.
struct ScenarioConfig {
    std::string name;
    std::size_t n = 0;  // oscillators per layer
    std::size_t m = 0;  // layers
    double eps_intra = 1.0;
    double eps_inter = 1.0;
    GraphSpec intra_graph;
    GraphSpec inter_graph;
    FrequencySpec frequencies;
    InitSpec init;
    PerturbationSpec perturbation;
    double dt = 1e-3;
    double t_end = 30.0;
    std::size_t record_every = 100;
    std::uint64_t seed = 1;

    std::size_t n_steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }

    void validate() const {
        if (name.empty()) throw ConfigError("name", "must not be empty");
        if (n < 2) throw ConfigError("n", "need at least 2 oscillators per layer");
        if (m < 2) throw ConfigError("m", "need at least 2 layers");
        if (!std::isfinite(eps_intra)) throw ConfigError("eps_intra", "must be finite");
        if (!std::isfinite(eps_inter)) throw ConfigError("eps_inter", "must be finite");
        if (intra_graph.kind == GraphSpec::Kind::erdos_renyi &&
            !(intra_graph.p >= 0.0 && intra_graph.p <= 1.0))
            throw ConfigError("intra_graph.p", "must be in [0, 1]");
        if (intra_graph.kind == GraphSpec::Kind::circulant &&
            (intra_graph.half_width < 1 || 2 * intra_graph.half_width > n - 1))
            throw ConfigError("intra_graph.half_width", "need 1 <= half_width <= (n-1)/2");
        if (inter_graph.kind == GraphSpec::Kind::erdos_renyi ||
            inter_graph.kind == GraphSpec::Kind::circulant)
            throw ConfigError("inter_graph.kind", "inter graph must be ring or complete");
        if (frequencies.kind == FrequencySpec::Kind::per_layer &&
            frequencies.per_layer.size() != m)
            throw ConfigError("frequencies.per_layer", "needs exactly one value per layer");
        if (init.kind == InitSpec::Kind::twisted && (init.p_intra < 0 || init.p_inter < 0))
            throw ConfigError("init.p_intra", "twist indices must be non-negative");
        if (!(perturbation.eta >= 0.0)) throw ConfigError("perturbation.eta", "must be >= 0");
        if (!(dt > 0.0)) throw ConfigError("dt", "must be positive");
        if (!(t_end > 0.0)) throw ConfigError("t_end", "must be positive");
        if (record_every < 1) throw ConfigError("record_every", "must be >= 1");
        if (n_steps() < 1) throw ConfigError("t_end", "run must cover at least one step");
    }
};

namespace detail {

inline Matrix build_graph(const GraphSpec& g, std::size_t size, SplitMix64& rng,
                          const char* field) {
    switch (g.kind) {
        case GraphSpec::Kind::erdos_renyi: return gen_erdos_renyi(size, g.p, rng);
        case GraphSpec::Kind::ring: return gen_ring(size);
        case GraphSpec::Kind::circulant: return gen_circulant(size, g.half_width);
        case GraphSpec::Kind::complete: return gen_complete(size);
    }
    throw ConfigError(field, "unknown graph kind");
}

}  // namespace detail

/// Materialize the coupling matrices and frequency vectors of a scenario.
/// Only the Erdos-Renyi generator consumes randomness; it draws from the
/// graph substream of the master seed.
inline MultiplexSystem build_system(const ScenarioConfig& cfg) {
    cfg.validate();
    SplitMix64 master(cfg.seed);
    SplitMix64 graph_rng = master.split(seed_stream::graph);
    MultiplexSystem sys;
    sys.intra = detail::build_graph(cfg.intra_graph, cfg.n, graph_rng, "intra_graph");
    sys.inter = detail::build_graph(cfg.inter_graph, cfg.m, graph_rng, "inter_graph");
    sys.eps_intra = cfg.eps_intra;
    sys.eps_inter = cfg.eps_inter;
    sys.omega_intra.assign(cfg.n, 0.0);
    sys.omega_inter.assign(cfg.m, 0.0);
    switch (cfg.frequencies.kind) {
        case FrequencySpec::Kind::zero: break;
        case FrequencySpec::Kind::uniform:
            sys.omega_intra.assign(cfg.n, cfg.frequencies.value);
            break;
        case FrequencySpec::Kind::per_layer:
            sys.omega_inter = cfg.frequencies.per_layer;
            break;
    }
    return sys;
}

/// Subsystem initial states of a scenario, before and after perturbation.
struct InitialStates {
    PhaseVector psi_base;  // unperturbed intra state
    PhaseVector phi_base;  // unperturbed inter state
    PhaseVector psi;       // integrated intra initial state
    PhaseVector phi;       // integrated inter initial state
};

/// Draw or construct the initial subsystem states: random_composed draws
/// psi then phi from U(-pi, pi) on the init substream; twisted builds the
/// two winding states. Perturbations draw from their own substreams, so the
/// four fig-5 variants of one master seed share graphs and base states.
inline InitialStates initial_states(const ScenarioConfig& cfg) {
    cfg.validate();
    SplitMix64 master(cfg.seed);
    SplitMix64 init_rng = master.split(seed_stream::init);
    InitialStates st;
    switch (cfg.init.kind) {
        case InitSpec::Kind::random_composed:
            st.psi_base.resize(cfg.n);
            st.phi_base.resize(cfg.m);
            for (double& v : st.psi_base) v = init_rng.uniform(-kPi, kPi);
            for (double& v : st.phi_base) v = init_rng.uniform(-kPi, kPi);
            break;
        case InitSpec::Kind::twisted:
            st.psi_base = twisted_state(cfg.n, cfg.init.p_intra);
            st.phi_base = twisted_state(cfg.m, cfg.init.p_inter);
            break;
    }
    st.psi = st.psi_base;
    st.phi = st.phi_base;
    const auto kind = cfg.perturbation.kind;
    if (kind == PerturbationSpec::Kind::intra || kind == PerturbationSpec::Kind::both) {
        SplitMix64 rng = master.split(seed_stream::perturb_intra);
        st.psi = perturb(st.psi_base, cfg.perturbation.eta, rng);
    }
    if (kind == PerturbationSpec::Kind::inter || kind == PerturbationSpec::Kind::both) {
        SplitMix64 rng = master.split(seed_stream::perturb_inter);
        st.phi = perturb(st.phi_base, cfg.perturbation.eta, rng);
    }
    return st;
}

/// Outcome of one scenario run, kept in memory: the three trajectories, the
/// four order-parameter curves and, for twisted starts, the stability report
/// of the base equilibrium.
struct ScenarioResult {
    MultiplexSystem system;
    InitialStates initial;
    Trajectory full;
    Trajectory intra;
    Trajectory inter;
    OrderParameterSeries series;
    std::optional<ComposedStabilityReport> stability;
};

inline ScenarioResult run_scenario_in_memory(const ScenarioConfig& cfg) {
    cfg.validate();
    ScenarioResult res;
    res.system = build_system(cfg);
    res.initial = initial_states(cfg);

    auto [weights, omega] = assemble_multiplex(res.system);
    const PhaseVector theta0 = compose_state(res.initial.psi, res.initial.phi);
    const std::size_t steps = cfg.n_steps();

    res.full = integrate_euler(theta0, omega, weights, cfg.dt, steps, cfg.record_every);
    res.intra = integrate_euler(res.initial.psi, res.system.omega_intra,
                                res.system.scaled_intra(), cfg.dt, steps, cfg.record_every);
    res.inter = integrate_euler(res.initial.phi, res.system.omega_inter,
                                res.system.scaled_inter(), cfg.dt, steps, cfg.record_every);
    for (Trajectory* t : {&res.full, &res.intra, &res.inter}) {
        t->scenario = cfg.name;
        t->seed = cfg.seed;
    }
    res.series = order_parameter_series(res.full, res.intra, res.inter);

    if (cfg.init.kind == InitSpec::Kind::twisted)
        res.stability = stability_of_composed(res.system, res.initial.psi_base,
                                              res.initial.phi_base);
    return res;
}

// --- config JSON -------------------------------------------------------------

namespace detail {

inline std::string graph_kind_name(GraphSpec::Kind k) {
    switch (k) {
        case GraphSpec::Kind::erdos_renyi: return "erdos_renyi";
        case GraphSpec::Kind::ring: return "ring";
        case GraphSpec::Kind::circulant: return "circulant";
        case GraphSpec::Kind::complete: return "complete";
    }
    return "?";
}

inline GraphSpec graph_from_json(const nlohmann::json& j, const char* field) {
    GraphSpec g;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "erdos_renyi") {
        g.kind = GraphSpec::Kind::erdos_renyi;
        g.p = j.at("p").get<double>();
    } else if (kind == "ring") {
        g.kind = GraphSpec::Kind::ring;
    } else if (kind == "circulant") {
        g.kind = GraphSpec::Kind::circulant;
        g.half_width = j.at("half_width").get<std::size_t>();
    } else if (kind == "complete") {
        g.kind = GraphSpec::Kind::complete;
    } else {
        throw ConfigError(field, "unknown graph kind '" + kind + "'");
    }
    return g;
}

inline nlohmann::json graph_to_json(const GraphSpec& g) {
    nlohmann::json j{{"kind", graph_kind_name(g.kind)}};
    if (g.kind == GraphSpec::Kind::erdos_renyi) j["p"] = g.p;
    if (g.kind == GraphSpec::Kind::circulant) j["half_width"] = g.half_width;
    return j;
}

}  // namespace detail

inline nlohmann::json config_to_json(const ScenarioConfig& cfg) {
    nlohmann::json freq{{"kind", cfg.frequencies.kind == FrequencySpec::Kind::zero ? "zero"
                                 : cfg.frequencies.kind == FrequencySpec::Kind::uniform
                                     ? "uniform"
                                     : "per_layer"}};
    if (cfg.frequencies.kind == FrequencySpec::Kind::uniform) freq["value"] = cfg.frequencies.value;
    if (cfg.frequencies.kind == FrequencySpec::Kind::per_layer)
        freq["values"] = cfg.frequencies.per_layer;

    nlohmann::json init{{"kind", cfg.init.kind == InitSpec::Kind::random_composed
                                     ? "random_composed"
                                     : "twisted"}};
    if (cfg.init.kind == InitSpec::Kind::twisted) {
        init["p_intra"] = cfg.init.p_intra;
        init["p_inter"] = cfg.init.p_inter;
    }

    const char* pk = cfg.perturbation.kind == PerturbationSpec::Kind::none    ? "none"
                     : cfg.perturbation.kind == PerturbationSpec::Kind::inter ? "inter"
                     : cfg.perturbation.kind == PerturbationSpec::Kind::intra ? "intra"
                                                                              : "both";
    nlohmann::json pert{{"kind", pk}};
    if (cfg.perturbation.kind != PerturbationSpec::Kind::none)
        pert["eta"] = cfg.perturbation.eta;

    return {{"name", cfg.name},
            {"n", cfg.n},
            {"m", cfg.m},
            {"eps_intra", cfg.eps_intra},
            {"eps_inter", cfg.eps_inter},
            {"intra_graph", detail::graph_to_json(cfg.intra_graph)},
            {"inter_graph", detail::graph_to_json(cfg.inter_graph)},
            {"frequencies", freq},
            {"init", init},
            {"perturbation", pert},
            {"dt", cfg.dt},
            {"t_end", cfg.t_end},
            {"record_every", cfg.record_every},
            {"seed", cfg.seed}};
}

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
    ScenarioConfig cfg;
    try {
        cfg.name = j.at("name").get<std::string>();
        cfg.n = j.at("n").get<std::size_t>();
        cfg.m = j.at("m").get<std::size_t>();
        cfg.eps_intra = j.at("eps_intra").get<double>();
        cfg.eps_inter = j.at("eps_inter").get<double>();
        cfg.intra_graph = detail::graph_from_json(j.at("intra_graph"), "intra_graph");
        cfg.inter_graph = detail::graph_from_json(j.at("inter_graph"), "inter_graph");

        const auto& jf = j.at("frequencies");
        const std::string fk = jf.at("kind").get<std::string>();
        if (fk == "zero") {
            cfg.frequencies.kind = FrequencySpec::Kind::zero;
        } else if (fk == "uniform") {
            cfg.frequencies.kind = FrequencySpec::Kind::uniform;
            cfg.frequencies.value = jf.at("value").get<double>();
        } else if (fk == "per_layer") {
            cfg.frequencies.kind = FrequencySpec::Kind::per_layer;
            cfg.frequencies.per_layer = jf.at("values").get<std::vector<double>>();
        } else {
            throw ConfigError("frequencies.kind", "unknown kind '" + fk + "'");
        }

        const auto& ji = j.at("init");
        const std::string ik = ji.at("kind").get<std::string>();
        if (ik == "random_composed") {
            cfg.init.kind = InitSpec::Kind::random_composed;
        } else if (ik == "twisted") {
            cfg.init.kind = InitSpec::Kind::twisted;
            cfg.init.p_intra = ji.at("p_intra").get<long>();
            cfg.init.p_inter = ji.at("p_inter").get<long>();
        } else {
            throw ConfigError("init.kind", "unknown kind '" + ik + "'");
        }

        if (j.contains("perturbation")) {
            const auto& jp = j.at("perturbation");
            const std::string pk = jp.at("kind").get<std::string>();
            if (pk == "none")
                cfg.perturbation.kind = PerturbationSpec::Kind::none;
            else if (pk == "inter")
                cfg.perturbation.kind = PerturbationSpec::Kind::inter;
            else if (pk == "intra")
                cfg.perturbation.kind = PerturbationSpec::Kind::intra;
            else if (pk == "both")
                cfg.perturbation.kind = PerturbationSpec::Kind::both;
            else
                throw ConfigError("perturbation.kind", "unknown kind '" + pk + "'");
            if (jp.contains("eta")) cfg.perturbation.eta = jp.at("eta").get<double>();
        }

        cfg.dt = j.at("dt").get<double>();
        cfg.t_end = j.at("t_end").get<double>();
        cfg.record_every = j.at("record_every").get<std::size_t>();
        cfg.seed = j.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", e.what());
    }
    cfg.validate();
    return cfg;
}

// --- builtin scenarios --------------------------------------------------------

/// The desk-scale reproductions of the reference experiments. The four fig5
/// variants share one master seed: the seed-splitting rule then guarantees
/// identical graphs and base twisted states across the perturbation panels.
inline std::vector<ScenarioConfig> builtin_scenarios() {
    std::vector<ScenarioConfig> out;

    ScenarioConfig fig2;
    fig2.name = "fig2";
    fig2.n = 20;
    fig2.m = 3;
    fig2.eps_intra = 1.0;
    fig2.eps_inter = 0.5;
    fig2.intra_graph = {GraphSpec::Kind::erdos_renyi, 0.25, 1};
    fig2.inter_graph.kind = GraphSpec::Kind::ring;
    fig2.frequencies.kind = FrequencySpec::Kind::zero;
    fig2.init.kind = InitSpec::Kind::random_composed;
    fig2.t_end = 30.0;
    fig2.seed = 101;
    out.push_back(fig2);

    ScenarioConfig fig3a = fig2;
    fig3a.name = "fig3a";
    fig3a.n = 100;
    fig3a.m = 5;
    fig3a.eps_inter = 3.0;
    fig3a.frequencies.kind = FrequencySpec::Kind::uniform;
    fig3a.frequencies.value = 2.0;
    fig3a.t_end = 15.0;
    fig3a.seed = 102;
    out.push_back(fig3a);

    ScenarioConfig fig3b = fig3a;
    fig3b.name = "fig3b";
    fig3b.eps_inter = 20.0;
    fig3b.frequencies.kind = FrequencySpec::Kind::per_layer;
    fig3b.frequencies.per_layer = {-20.0, -10.0, 0.0, 10.0, 20.0};
    fig3b.seed = 103;
    out.push_back(fig3b);

    ScenarioConfig fig4 = fig2;
    fig4.name = "fig4";
    fig4.n = 100;
    fig4.m = 10;
    fig4.eps_intra = 0.75;
    fig4.eps_inter = 10.0;
    fig4.frequencies.kind = FrequencySpec::Kind::per_layer;
    fig4.frequencies.per_layer.clear();
    for (int l = 0; l < 10; ++l) fig4.frequencies.per_layer.push_back(3.0 * (l - 4.5));
    fig4.t_end = 50.0;
    fig4.seed = 104;
    out.push_back(fig4);

    ScenarioConfig fig5a;
    fig5a.name = "fig5a";
    fig5a.n = 100;
    fig5a.m = 3;
    fig5a.eps_intra = 0.10;
    fig5a.eps_inter = 1.0;
    fig5a.intra_graph = {GraphSpec::Kind::circulant, 0.0, 20};
    fig5a.inter_graph.kind = GraphSpec::Kind::ring;
    fig5a.frequencies.kind = FrequencySpec::Kind::zero;
    fig5a.init = {InitSpec::Kind::twisted, 2, 1};
    fig5a.perturbation.kind = PerturbationSpec::Kind::none;
    fig5a.t_end = 20.0;
    fig5a.seed = 205;
    out.push_back(fig5a);

    ScenarioConfig fig5b = fig5a;
    fig5b.name = "fig5b";
    fig5b.perturbation = {PerturbationSpec::Kind::inter, 0.025};
    out.push_back(fig5b);

    ScenarioConfig fig5c = fig5a;
    fig5c.name = "fig5c";
    fig5c.perturbation = {PerturbationSpec::Kind::intra, 0.025};
    out.push_back(fig5c);

    ScenarioConfig fig5d = fig5a;
    fig5d.name = "fig5d";
    fig5d.perturbation = {PerturbationSpec::Kind::both, 0.025};
    out.push_back(fig5d);

    return out;
}

inline std::optional<ScenarioConfig> find_builtin(const std::string& name) {
    for (auto& cfg : builtin_scenarios())
        if (cfg.name == name) return cfg;
    return std::nullopt;
}

// --- artifacts ----------------------------------------------------------------

/// Paths of the files one run produced, plus the resolved configuration that
/// reproduces them.
struct RunArtifacts {
    std::filesystem::path trajectory;
    std::filesystem::path order_parameters;
    std::filesystem::path resolved_config;
    std::filesystem::path metadata;
    std::optional<std::filesystem::path> stability;
    nlohmann::json resolved;
};

/// Run a scenario and write its artifacts under out_dir (created if needed):
/// <name>.trajectory.csv, <name>.order.csv, <name>.meta.json,
/// <name>.config.json and, for twisted starts, <name>.stability.json.
/// All files are written atomically; the resolved config re-runs the
/// scenario bit-identically.
inline RunArtifacts run_scenario(const ScenarioConfig& cfg,
                                 const std::filesystem::path& out_dir) {
    ScenarioResult res = run_scenario_in_memory(cfg);
    std::filesystem::create_directories(out_dir);

    RunArtifacts art;
    art.resolved = config_to_json(cfg);
    {
        SplitMix64 master(cfg.seed);
        art.resolved["derived_seeds"] = {
            {"graph", master.split(seed_stream::graph).state()},
            {"init", master.split(seed_stream::init).state()},
            {"perturb_intra", master.split(seed_stream::perturb_intra).state()},
            {"perturb_inter", master.split(seed_stream::perturb_inter).state()}};
    }

    art.trajectory = out_dir / (cfg.name + ".trajectory.csv");
    atomic_write(art.trajectory, trajectory_to_csv(res.full));

    art.order_parameters = out_dir / (cfg.name + ".order.csv");
    atomic_write(art.order_parameters, order_series_to_csv(res.series));

    art.metadata = out_dir / (cfg.name + ".meta.json");
    const nlohmann::json meta = {{"scenario", cfg.name}, {"seed", cfg.seed},
                                 {"dt", cfg.dt},         {"N", cfg.n},
                                 {"M", cfg.m},           {"eps_intra", cfg.eps_intra},
                                 {"eps_inter", cfg.eps_inter}};
    atomic_write(art.metadata, meta.dump(2) + "\n");

    art.resolved_config = out_dir / (cfg.name + ".config.json");
    atomic_write(art.resolved_config, art.resolved.dump(2) + "\n");

    if (res.stability) {
        art.stability = out_dir / (cfg.name + ".stability.json");
        atomic_write(*art.stability, composed_stability_to_json(*res.stability).dump(2) + "\n");
    }
    return art;
}

// --- proposition verification ---------------------------------------------------

/// Numerically verify the composition, order-parameter, spectrum and
/// stability propositions on one configuration. Failures become report
/// entries, not errors. The twisted-grid stability check needs twisted
/// equilibria, so it runs over the winding numbers only when the intra graph
/// is circulant; otherwise only the synchronized state is checked.
inline nlohmann::json verify_propositions(const ScenarioConfig& cfg) {
    cfg.validate();
    nlohmann::json checks = nlohmann::json::array();
    bool all_passed = true;
    auto push = [&](const std::string& name, bool passed, const nlohmann::json& details) {
        nlohmann::json c = details;
        c["name"] = name;
        c["passed"] = passed;
        checks.push_back(c);
        all_passed = all_passed && passed;
    };

    MultiplexSystem sys = build_system(cfg);

    // Proposition 1: integrate the assembled system and its two factors from
    // a seeded random composed state; the trajectories must agree.
    {
        SplitMix64 master(cfg.seed);
        SplitMix64 init_rng = master.split(seed_stream::init);
        PhaseVector psi0(cfg.n), phi0(cfg.m);
        for (double& v : psi0) v = init_rng.uniform(-kPi, kPi);
        for (double& v : phi0) v = init_rng.uniform(-kPi, kPi);
        const double res = composition_residual(sys, psi0, phi0, cfg.dt, cfg.n_steps());
        push("composition_exactness", res < 1e-8,
             {{"residual", res}, {"tolerance", 1e-8}, {"steps", cfg.n_steps()}});
    }

    // Proposition 2: R factorizes over 1000 seeded random state pairs.
    {
        SplitMix64 rng = SplitMix64(cfg.seed).split(seed_stream::init).split(99);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            PhaseVector psi(cfg.n), phi(cfg.m);
            for (double& v : psi) v = rng.uniform(-kPi, kPi);
            for (double& v : phi) v = rng.uniform(-kPi, kPi);
            const double direct = order_parameter(compose_state(psi, phi));
            const double product = order_parameter_product(psi, phi);
            worst = std::max(worst, std::abs(direct - product));
        }
        push("order_parameter_factorization", worst < 1e-10,
             {{"residual", worst}, {"tolerance", 1e-10}, {"pairs", 1000}});
    }

    // Proposition 3: assembled Jacobian spectrum equals the sumset of the
    // subsystem spectra (skipped above the matrix-size budget).
    if (cfg.n * cfg.m <= 2500) {
        const bool circulant_intra = cfg.intra_graph.kind == GraphSpec::Kind::circulant ||
                                     cfg.intra_graph.kind == GraphSpec::Kind::ring;
        const PhaseVector psi = circulant_intra
                                    ? twisted_state(cfg.n, std::max(cfg.init.p_intra, 1L))
                                    : PhaseVector(cfg.n, 0.0);
        const PhaseVector phi = twisted_state(cfg.m, cfg.init.p_inter);
        const auto spec_full = spectrum_sym(jacobian_multiplex(sys, psi, phi));
        const auto sumset = spectrum_sumset(
            spectrum_sym(jacobian_single_layer(sys.scaled_intra(), psi)),
            spectrum_sym(jacobian_single_layer(sys.scaled_inter(), phi)));
        double worst = 0.0;
        for (std::size_t i = 0; i < spec_full.size(); ++i)
            worst = std::max(worst, std::abs(spec_full[i] - sumset[i]));
        push("spectrum_sumset", worst < 1e-8, {{"residual", worst}, {"tolerance", 1e-8}});
    } else {
        push("spectrum_sumset", true, {{"skipped", "N*M exceeds 2500"}});
    }

    // Proposition 4: over the twisted grid, composed stability must equal
    // (intra stable and inter stable) on every non-degenerate cell.
    {
        std::vector<long> p_intra_grid{0};
        if (cfg.intra_graph.kind == GraphSpec::Kind::circulant ||
            cfg.intra_graph.kind == GraphSpec::Kind::ring)
            for (long p = 1; p <= static_cast<long>(std::min<std::size_t>(cfg.n / 2, 5)); ++p)
                p_intra_grid.push_back(p);
        std::vector<long> p_inter_grid;
        for (long p = 0; p <= static_cast<long>(cfg.m / 2); ++p) p_inter_grid.push_back(p);

        std::size_t cells = 0, degenerate = 0, violations = 0;
        for (long pi : p_intra_grid)
            for (long pe : p_inter_grid) {
                const auto rep = stability_of_composed(sys, twisted_state(cfg.n, pi),
                                                       twisted_state(cfg.m, pe));
                ++cells;
                if (rep.degenerate)
                    ++degenerate;
                else if (!rep.iff_holds)
                    ++violations;
            }
        push("stability_iff", violations == 0,
             {{"cells", cells}, {"degenerate", degenerate}, {"violations", violations}});
    }

    return {{"scenario", cfg.name}, {"passed", all_passed}, {"checks", checks}};
}

}  // namespace kuraplex
