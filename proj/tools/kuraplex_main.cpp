// kuraplex: scenario runner for Kuramoto oscillators on multiplex networks.
//
// Subcommands:
//   list-scenarios                  show the builtin configurations
//   run <scenario|config.json>...   integrate and write artifacts
//   verify <scenario|config.json>   numerically check the composition,
//                                   order-parameter, spectrum and stability
//                                   propositions for one configuration
//   dump-graph <scenario|config>    write the generated coupling matrices
//
// Errors leave a machine-readable JSON object on stderr and a nonzero exit
// code. A failed verification exits with 3.

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "kuraplex/kuraplex.hpp"

namespace fs = std::filesystem;
using namespace kuraplex;

namespace {

ScenarioConfig load_config(const std::string& arg) {
    if (auto builtin = find_builtin(arg)) return *builtin;
    if (!fs::exists(arg))
        throw ConfigError("scenario", "'" + arg + "' is neither a builtin scenario nor a file");
    std::ifstream in(arg);
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
    std::optional<double> t_end;

    void apply(ScenarioConfig& cfg) const {
        if (seed) cfg.seed = *seed;
        if (dt) cfg.dt = *dt;
        if (t_end) cfg.t_end = *t_end;
        cfg.validate();
    }
};

void emit_error(const std::string& kind, const std::string& message,
                const std::string& field = "") {
    nlohmann::json err{{"error", kind}, {"message", message}};
    if (!field.empty()) err["field"] = field;
    std::cerr << err.dump() << "\n";
}

int cmd_run(const std::vector<std::string>& names, const Overrides& ov, const fs::path& out,
            unsigned jobs) {
    std::vector<ScenarioConfig> configs;
    for (const auto& name : names) {
        ScenarioConfig cfg = load_config(name);
        ov.apply(cfg);
        configs.push_back(std::move(cfg));
    }

    std::atomic<std::size_t> next{0};
    std::mutex io_mutex;
    std::vector<std::string> failures;

    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= configs.size()) return;
            try {
                const RunArtifacts art = run_scenario(configs[k], out);
                std::lock_guard lock(io_mutex);
                std::cout << configs[k].name << ": wrote " << art.trajectory.string() << ", "
                          << art.order_parameters.string();
                if (art.stability) std::cout << ", " << art.stability->string();
                std::cout << "\n";
            } catch (const std::exception& e) {
                std::lock_guard lock(io_mutex);
                failures.push_back(configs[k].name + ": " + e.what());
            }
        }
    };

    const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, configs.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (const auto& f : failures) emit_error("run_failed", f);
    return failures.empty() ? 0 : 1;
}

int cmd_verify(const std::string& name, const Overrides& ov, const fs::path& out) {
    ScenarioConfig cfg = load_config(name);
    ov.apply(cfg);
    const nlohmann::json report = verify_propositions(cfg);
    std::cout << report.dump(2) << "\n";
    if (!out.empty()) {
        fs::create_directories(out);
        atomic_write(out / (cfg.name + ".verify.json"), report.dump(2) + "\n");
    }
    return report.at("passed").get<bool>() ? 0 : 3;
}

int cmd_dump_graph(const std::string& name, const Overrides& ov, const fs::path& out,
                   const std::string& format) {
    ScenarioConfig cfg = load_config(name);
    ov.apply(cfg);
    const MultiplexSystem sys = build_system(cfg);
    const auto [merged, omega] = assemble_multiplex(sys);
    fs::create_directories(out);

    auto dump = [&](const std::string& stem, const Matrix& m) {
        if (format == "csv" || format == "both") {
            atomic_write(out / (stem + ".csv"), matrix_to_csv(m));
            std::cout << "wrote " << (out / (stem + ".csv")).string() << "\n";
        }
        if (format == "json" || format == "both") {
            atomic_write(out / (stem + ".json"), matrix_to_json(m).dump() + "\n");
            std::cout << "wrote " << (out / (stem + ".json")).string() << "\n";
        }
    };
    dump(cfg.name + ".intra", sys.intra);
    dump(cfg.name + ".inter", sys.inter);
    dump(cfg.name + ".merged", merged);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kuramoto oscillators on multiplex networks"};
    app.require_subcommand(1);

    Overrides ov;
    fs::path out = "out";
    unsigned jobs = 1;
    std::vector<std::string> run_names;
    std::string verify_name, dump_name;
    std::string format = "csv";

    auto add_overrides = [&](CLI::App* cmd) {
        cmd->add_option("--seed", ov.seed, "master seed override");
        cmd->add_option("--dt", ov.dt, "integration step override");
        cmd->add_option("--t-end", ov.t_end, "simulation length override");
        cmd->add_option("--out", out, "output directory");
    };

    CLI::App* run = app.add_subcommand("run", "run one or more scenarios");
    run->add_option("scenario", run_names, "builtin scenario names or config file paths")
        ->required();
    add_overrides(run);
    run->add_option("--jobs", jobs, "run scenarios concurrently");

    CLI::App* verify = app.add_subcommand("verify", "verify the propositions numerically");
    verify->add_option("scenario", verify_name, "builtin scenario name or config file path")
        ->required();
    add_overrides(verify);

    CLI::App* list = app.add_subcommand("list-scenarios", "list builtin scenarios");

    CLI::App* dump = app.add_subcommand("dump-graph", "write the generated coupling matrices");
    dump->add_option("scenario", dump_name, "builtin scenario name or config file path")
        ->required();
    add_overrides(dump);
    dump->add_option("--format", format, "csv, json or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& cfg : builtin_scenarios()) {
                std::printf("%-7s N=%-4zu M=%-3zu eps_intra=%-5g eps_inter=%-5g t_end=%-5g seed=%llu\n",
                            cfg.name.c_str(), cfg.n, cfg.m, cfg.eps_intra, cfg.eps_inter,
                            cfg.t_end, static_cast<unsigned long long>(cfg.seed));
            }
            return 0;
        }
        if (run->parsed()) return cmd_run(run_names, ov, out, jobs);
        if (verify->parsed()) return cmd_verify(verify_name, ov, out);
        if (dump->parsed()) return cmd_dump_graph(dump_name, ov, out, format);
    } catch (const ConfigError& e) {
        emit_error("config", e.what(), e.field);
        return 1;
    } catch (const DivergenceError& e) {
        emit_error("divergence", e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
    return 0;
}
