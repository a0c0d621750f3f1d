#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "onama/experiment.hpp"
#include "onama/graph.hpp"
#include "onama/topology_gen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRunFailure = 1;
constexpr int kExitConfigError = 2;

int cmd_run(const std::string& config_path, std::int64_t seed_override,
            const std::string& out_dir) {
    onama::ExperimentSpec spec;
    try {
        spec = onama::parse_experiment(config_path);
        if (seed_override >= 0)
            spec.seeds = {static_cast<std::uint64_t>(seed_override)};
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    try {
        return onama::run_experiment(spec, out_dir) == 0 ? kExitOk : kExitRunFailure;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return kExitRunFailure;
    }
}

int cmd_gen_topology(const std::string& kind, std::uint32_t n, double p, double radius,
                     std::uint64_t seed, const std::string& out_path) {
    onama::TopologySpec spec;
    try {
        if (kind == "fig1") spec = onama::TopologySpec::fixture7();
        else if (kind == "complete") spec = onama::TopologySpec::complete(n);
        else if (kind == "path") spec = onama::TopologySpec::path_graph(n);
        else if (kind == "erdos-renyi") spec = onama::TopologySpec::erdos_renyi(n, p, seed);
        else if (kind == "random-geometric")
            spec = onama::TopologySpec::random_geometric(n, radius, seed);
        else {
            std::cerr << "config error: unknown topology kind '" << kind << "'\n";
            return kExitConfigError;
        }
        onama::ConflictGraph g = onama::generate_topology(spec);
        onama::save_topology(g, out_path);
        std::cout << "wrote " << out_path << " (" << g.node_count() << " nodes, "
                  << g.edge_count() << " edges)\n";
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailure;
    }
}

int cmd_summarize(const std::string& dir) {
    try {
        return onama::summarize_directory(dir);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRunFailure;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ONAMA/NAMA TDMA scheduling simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::int64_t seed_override = -1;
    std::string out_dir = "results";
    CLI::App* run = app.add_subcommand("run", "Run an experiment from a JSON config");
    run->add_option("--config", config_path, "experiment config file")->required();
    run->add_option("--seed", seed_override, "override the config's seed list");
    run->add_option("--out", out_dir, "output directory");

    std::string kind;
    std::uint32_t n = 0;
    double p = 0.0, radius = 0.0;
    std::uint64_t gseed = 0;
    std::string topo_out;
    CLI::App* gen = app.add_subcommand("gen-topology", "Generate a topology file");
    gen->add_option("--kind", kind,
                    "fig1 | complete | path | erdos-renyi | random-geometric")
        ->required();
    gen->add_option("--n", n, "node count");
    gen->add_option("--p", p, "edge probability (erdos-renyi)");
    gen->add_option("--radius", radius, "connection radius (random-geometric)");
    gen->add_option("--seed", gseed, "generator seed");
    gen->add_option("--out", topo_out, "output file")->required();

    std::string sum_dir;
    CLI::App* sum = app.add_subcommand("summarize", "Aggregate per-run JSON summaries");
    sum->add_option("--in", sum_dir, "results directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    if (run->parsed()) return cmd_run(config_path, seed_override, out_dir);
    if (gen->parsed()) return cmd_gen_topology(kind, n, p, radius, gseed, topo_out);
    if (sum->parsed()) return cmd_summarize(sum_dir);
    return kExitConfigError;
}
