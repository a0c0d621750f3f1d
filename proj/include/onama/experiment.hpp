#ifndef ONAMA_EXPERIMENT_HPP
#define ONAMA_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "onama/graph.hpp"
#include "onama/pipeline.hpp"
#include "onama/sim.hpp"
#include "onama/topology_gen.hpp"
#include "onama/types.hpp"

namespace onama {

// One point of the experiment grid.
struct RunPoint {
    Protocol protocol = Protocol::Onama;
    std::uint32_t depth_m = 8;
    double delivery_prob = 1.0;
    std::uint64_t seed = 0;

    std::string label() const;
};

// A full experiment: one topology/traffic setting crossed over
// protocol x pipeline depth x delivery probability x seed.
struct ExperimentSpec {
    TopologySpec topology;
    std::string events_path;
    std::vector<Protocol> protocols = {Protocol::Onama};
    std::vector<std::uint32_t> depth_values = {8};
    PipelineConfig pipeline_base;  // G, S, L shared across the grid
    std::vector<double> delivery_probs = {1.0};
    TrafficModel traffic;
    Slot slots = 100;
    std::vector<std::uint64_t> seeds = {0};

    bool operator==(const ExperimentSpec&) const = default;

    std::vector<RunPoint> grid() const;
    SimulationConfig materialize(const ConflictGraph& topo,
                                 const std::vector<GraphEvent>& events,
                                 const RunPoint& point) const;
};

// Parses and validates an experiment config. Unknown keys and out-of-range
// values are rejected with a diagnostic naming the offending field.
// Relative topology/event paths resolve against base_dir.
ExperimentSpec parse_experiment(const std::string& path);
ExperimentSpec parse_experiment_json(const nlohmann::json& j, const std::string& base_dir);

nlohmann::json experiment_to_json(const ExperimentSpec& spec);

// Executes every grid point (in parallel across worker threads), writing
// per-run CSV + JSON under out_dir plus an aggregate summary.json with
// per-protocol means and ONAMA:NAMA ratios. Returns 0 on success, 1 if any
// run failed (partial results are kept).
int run_experiment(const ExperimentSpec& spec, const std::string& out_dir);

// Rebuilds summary.json from the per-run JSON files in a directory.
int summarize_directory(const std::string& dir);

}  // namespace onama

#endif
