#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "onama/experiment.hpp"
#include "onama/priority.hpp"
#include "onama/topology_gen.hpp"

using namespace onama;
using nlohmann::json;
namespace fs = std::filesystem;

TEST_CASE("minimal config fills documented defaults") {
    json j = {{"topology", {{"kind", "fig1"}}},
              {"protocol", "ONAMA"},
              {"slots", 100}};
    ExperimentSpec spec = parse_experiment_json(j, ".");
    CHECK(spec.topology.kind == TopologySpec::Kind::Fixture7);
    CHECK(spec.protocols == std::vector<Protocol>{Protocol::Onama});
    CHECK(spec.depth_values == std::vector<std::uint32_t>{8});
    CHECK(spec.pipeline_base.snapshot_period_g == 1);
    CHECK(spec.delivery_probs == std::vector<double>{1.0});
    CHECK(spec.traffic.arrival_prob == 1.0);
    CHECK(spec.slots == 100);
    CHECK(spec.seeds == std::vector<std::uint64_t>{0});
}

TEST_CASE("out-of-range and unknown fields are rejected by name") {
    json base = {{"topology", {{"kind", "fig1"}}}};

    SUBCASE("M = 0") {
        json j = base;
        j["pipeline"] = {{"M", 0}};
        CHECK_THROWS_WITH_AS(parse_experiment_json(j, "."), "M must be >= 1",
                             std::invalid_argument);
    }
    SUBCASE("unknown top-level key") {
        json j = base;
        j["pipelines"] = json::object();
        CHECK_THROWS_AS(parse_experiment_json(j, "."), std::invalid_argument);
    }
    SUBCASE("unknown nested key") {
        json j = base;
        j["channel"] = {{"loss", 0.5}};
        CHECK_THROWS_AS(parse_experiment_json(j, "."), std::invalid_argument);
    }
    SUBCASE("delivery probability out of range") {
        json j = base;
        j["channel"] = {{"delivery_prob", 2.0}};
        CHECK_THROWS_AS(parse_experiment_json(j, "."), std::invalid_argument);
    }
    SUBCASE("missing topology") {
        json j = {{"slots", 10}};
        CHECK_THROWS_AS(parse_experiment_json(j, "."), std::invalid_argument);
    }
}

TEST_CASE("protocol x seed grid is the Cartesian product") {
    json j = {{"topology", {{"kind", "complete"}, {"n", 3}}},
              {"protocols", {"NAMA", "ONAMA"}},
              {"seeds", {1, 2, 3}}};
    ExperimentSpec spec = parse_experiment_json(j, ".");
    auto grid = spec.grid();
    CHECK(grid.size() == 6);
    int nama = 0;
    for (const RunPoint& p : grid) nama += p.protocol == Protocol::Nama;
    CHECK(nama == 3);
}

TEST_CASE("config echo round-trips to an equivalent spec") {
    json j = {{"topology", {{"kind", "erdos-renyi"}, {"n", 30}, {"p", 0.2}, {"seed", 5}}},
              {"protocols", {"NAMA", "ONAMA"}},
              {"pipeline", {{"M", {2, 8}}, {"G", 2}, {"S", 3}, {"L", 64}}},
              {"channel", {{"delivery_prob", {0.5, 1.0}}}},
              {"traffic", {{"lambda", 0.3}}},
              {"slots", 50},
              {"seeds", {7, 8}}};
    ExperimentSpec spec = parse_experiment_json(j, ".");
    ExperimentSpec back = parse_experiment_json(experiment_to_json(spec), ".");
    CHECK(back == spec);
}

TEST_CASE("topology generators") {
    SUBCASE("complete(4) has 4 nodes and 6 edges") {
        ConflictGraph g = generate_topology(TopologySpec::complete(4));
        CHECK(g.node_count() == 4);
        CHECK(g.edge_count() == 6);
    }
    SUBCASE("fig1 matches the 7-node fixture") {
        ConflictGraph g = generate_topology(TopologySpec::fixture7());
        CHECK(g.node_count() == 7);
        CHECK(g.edge_count() == 6);
        CHECK(g == make_fixture7().graph);
    }
    SUBCASE("erdos-renyi is deterministic per seed") {
        auto spec = TopologySpec::erdos_renyi(50, 0.1, 12);
        CHECK(generate_topology(spec) == generate_topology(spec));
        auto other = TopologySpec::erdos_renyi(50, 0.1, 13);
        CHECK(generate_topology(spec) != generate_topology(other));
    }
    SUBCASE("random-geometric is deterministic per seed") {
        auto spec = TopologySpec::random_geometric(40, 0.2, 3);
        CHECK(generate_topology(spec) == generate_topology(spec));
    }
    SUBCASE("degenerate parameters rejected") {
        CHECK_THROWS_AS(generate_topology(TopologySpec::complete(0)), std::invalid_argument);
        CHECK_THROWS_AS(generate_topology(TopologySpec::erdos_renyi(5, 1.5, 0)),
                        std::invalid_argument);
        CHECK_THROWS_AS(generate_topology(TopologySpec::random_geometric(5, -1.0, 0)),
                        std::invalid_argument);
    }
}

TEST_CASE("fixture id assignment realizes the required priority order") {
    Fixture7 fx = make_fixture7();
    for (int r = 0; r + 1 < 7; ++r)
        CHECK(compute_priority(fx.role_ids[r], fx.pinned_slot) <
              compute_priority(fx.role_ids[r + 1], fx.pinned_slot));
    // Structure by rank: hub-center and center-leaf edges only.
    CHECK(fx.graph.has_edge(fx.role_ids[6], fx.role_ids[4]));
    CHECK(fx.graph.has_edge(fx.role_ids[6], fx.role_ids[5]));
    CHECK(fx.graph.has_edge(fx.role_ids[4], fx.role_ids[0]));
    CHECK(fx.graph.has_edge(fx.role_ids[4], fx.role_ids[1]));
    CHECK(fx.graph.has_edge(fx.role_ids[5], fx.role_ids[2]));
    CHECK(fx.graph.has_edge(fx.role_ids[5], fx.role_ids[3]));
}

TEST_CASE("run_experiment writes per-run files and a paired summary") {
    fs::path dir = fs::temp_directory_path() / "onama_exp_test";
    fs::remove_all(dir);

    ExperimentSpec spec;
    spec.topology = TopologySpec::fixture7();
    spec.protocols = {Protocol::Nama, Protocol::Onama};
    spec.seeds = {1, 2};
    spec.slots = 60;
    CHECK(run_experiment(spec, dir.string()) == 0);

    CHECK(fs::exists(dir / "NAMA_M8_p1_s1.csv"));
    CHECK(fs::exists(dir / "ONAMA_M8_p1_s2.json"));
    std::ifstream in(dir / "summary.json");
    REQUIRE(in.good());
    json summary;
    in >> summary;
    CHECK(summary.at("failed_runs").get<int>() == 0);
    CHECK(summary.at("protocols").contains("ONAMA"));
    auto ratios = summary.at("onama_vs_nama");
    REQUIRE(ratios.size() == 2);
    for (const auto& r : ratios) CHECK(r.at("concurrency_ratio").get<double>() >= 1.0);
    // The echoed config re-parses to the spec that produced it.
    ExperimentSpec echoed = parse_experiment_json(summary.at("config"), dir.string());
    CHECK(echoed == spec);
    fs::remove_all(dir);
}
