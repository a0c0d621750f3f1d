#include "onama/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "onama/dmis.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace onama {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) fail(ctx + ": unknown key '" + it.key() + "'");
    }
}

std::string format_prob(double p) {
    std::ostringstream ss;
    ss << p;
    return ss.str();
}

template <typename T>
std::vector<T> scalar_or_array(const json& v, const std::string& ctx) {
    std::vector<T> out;
    if (v.is_array()) {
        if (v.empty()) fail(ctx + ": empty list");
        for (const auto& e : v) out.push_back(e.get<T>());
    } else {
        out.push_back(v.get<T>());
    }
    return out;
}

TopologySpec parse_topology_spec(const json& j, const std::string& base_dir) {
    if (!j.is_object()) fail("topology: expected an object");
    check_keys(j, {"kind", "path", "n", "p", "radius", "seed"}, "topology");
    if (!j.contains("kind")) fail("topology: missing 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    TopologySpec spec;
    auto get_n = [&] {
        if (!j.contains("n")) fail("topology(" + kind + "): missing 'n'");
        return j.at("n").get<std::uint32_t>();
    };
    if (kind == "file") {
        spec.kind = TopologySpec::Kind::File;
        if (!j.contains("path")) fail("topology(file): missing 'path'");
        fs::path p = j.at("path").get<std::string>();
        if (p.is_relative()) p = fs::path(base_dir) / p;
        spec.path = p.string();
    } else if (kind == "fig1") {
        spec.kind = TopologySpec::Kind::Fixture7;
    } else if (kind == "complete") {
        spec = TopologySpec::complete(get_n());
    } else if (kind == "path") {
        spec = TopologySpec::path_graph(get_n());
    } else if (kind == "erdos-renyi") {
        if (!j.contains("p")) fail("topology(erdos-renyi): missing 'p'");
        spec = TopologySpec::erdos_renyi(get_n(), j.at("p").get<double>(),
                                         j.value("seed", std::uint64_t{0}));
    } else if (kind == "random-geometric") {
        if (!j.contains("radius")) fail("topology(random-geometric): missing 'radius'");
        spec = TopologySpec::random_geometric(get_n(), j.at("radius").get<double>(),
                                              j.value("seed", std::uint64_t{0}));
    } else {
        fail("topology: unknown kind '" + kind + "'");
    }
    return spec;
}

json topology_spec_to_json(const TopologySpec& spec) {
    json j;
    j["kind"] = spec.kind_name();
    switch (spec.kind) {
        case TopologySpec::Kind::File: j["path"] = spec.path; break;
        case TopologySpec::Kind::Fixture7: break;
        case TopologySpec::Kind::Complete:
        case TopologySpec::Kind::Path: j["n"] = spec.n; break;
        case TopologySpec::Kind::ErdosRenyi:
            j["n"] = spec.n;
            j["p"] = spec.p;
            j["seed"] = spec.seed;
            break;
        case TopologySpec::Kind::RandomGeometric:
            j["n"] = spec.n;
            j["radius"] = spec.radius;
            j["seed"] = spec.seed;
            break;
    }
    return j;
}

struct RunOutcome {
    RunPoint point;
    bool ok = false;
    std::string error;
    json summary;
};

json run_summary_json(const ExperimentSpec& spec, const RunPoint& pt, const Metrics& m) {
    json j;
    j["label"] = pt.label();
    j["protocol"] = to_string(pt.protocol);
    j["seed"] = pt.seed;
    j["M"] = pt.depth_m;
    j["delivery_prob"] = pt.delivery_prob;
    j["slots"] = spec.slots;
    j["mean_concurrency"] = m.mean_concurrency();
    j["throughput"] = m.throughput();
    j["mean_delay"] = m.mean_delay();
    j["delivered"] = m.total_delivered();
    j["miss_count"] = m.miss_count;
    j["control_drops"] = m.control_drops;
    j["violations_snapshot"] = m.total_violations_snapshot();
    j["violations_instant"] = m.total_violations_instant();
    return j;
}

json aggregate_summaries(const std::vector<json>& runs) {
    json agg;
    // Per-protocol means.
    std::map<std::string, std::vector<const json*>> by_proto;
    for (const json& r : runs) by_proto[r.at("protocol").get<std::string>()].push_back(&r);
    json protocols = json::object();
    for (const auto& [proto, rs] : by_proto) {
        double conc = 0, thr = 0, delay = 0;
        std::uint64_t viol = 0, miss = 0;
        for (const json* r : rs) {
            conc += r->at("mean_concurrency").get<double>();
            thr += r->at("throughput").get<double>();
            delay += r->at("mean_delay").get<double>();
            viol += r->at("violations_snapshot").get<std::uint64_t>();
            miss += r->at("miss_count").get<std::uint64_t>();
        }
        const double k = static_cast<double>(rs.size());
        protocols[proto] = {{"runs", rs.size()},
                            {"mean_concurrency", conc / k},
                            {"mean_throughput", thr / k},
                            {"mean_delay", delay / k},
                            {"violations_snapshot", viol},
                            {"miss_count", miss}};
    }
    agg["protocols"] = protocols;
    // Paired ONAMA:NAMA ratios per (M, delivery_prob, seed).
    std::map<std::string, const json*> nama, onama;
    for (const json& r : runs) {
        std::ostringstream key;
        key << r.at("M").get<std::uint32_t>() << '|' << r.at("delivery_prob").get<double>()
            << '|' << r.at("seed").get<std::uint64_t>();
        const std::string proto = r.at("protocol").get<std::string>();
        if (proto == "NAMA") nama[key.str()] = &r;
        else if (proto == "ONAMA") onama[key.str()] = &r;
    }
    json ratios = json::array();
    for (const auto& [key, on] : onama) {
        auto it = nama.find(key);
        if (it == nama.end()) continue;
        const json& na = *it->second;
        json entry;
        entry["seed"] = on->at("seed");
        entry["M"] = on->at("M");
        entry["delivery_prob"] = on->at("delivery_prob");
        const double nc = na.at("mean_concurrency").get<double>();
        const double nt = na.at("throughput").get<double>();
        const double nd = on->at("mean_delay").get<double>();
        const double dd = na.at("mean_delay").get<double>();
        entry["concurrency_ratio"] =
            nc > 0 ? on->at("mean_concurrency").get<double>() / nc : 0.0;
        entry["throughput_ratio"] = nt > 0 ? on->at("throughput").get<double>() / nt : 0.0;
        entry["delay_ratio"] = nd > 0 ? dd / nd : 0.0;
        ratios.push_back(entry);
    }
    agg["onama_vs_nama"] = ratios;
    return agg;
}

}  // namespace

std::string RunPoint::label() const {
    std::ostringstream ss;
    ss << to_string(protocol) << "_M" << depth_m << "_p" << format_prob(delivery_prob)
       << "_s" << seed;
    return ss.str();
}

std::vector<RunPoint> ExperimentSpec::grid() const {
    std::vector<RunPoint> out;
    for (Protocol proto : protocols)
        for (std::uint32_t m : depth_values)
            for (double p : delivery_probs)
                for (std::uint64_t s : seeds)
                    out.push_back(RunPoint{proto, m, p, s});
    return out;
}

SimulationConfig ExperimentSpec::materialize(const ConflictGraph& topo,
                                             const std::vector<GraphEvent>& events,
                                             const RunPoint& point) const {
    SimulationConfig cfg;
    cfg.topology = topo;
    cfg.events = events;
    cfg.protocol = point.protocol;
    cfg.pipeline = pipeline_base;
    cfg.pipeline.depth_m = point.depth_m;
    cfg.channel.control_delivery_prob = point.delivery_prob;
    cfg.traffic = traffic;
    cfg.total_slots = slots;
    cfg.rng_seed = point.seed;
    return cfg;
}

ExperimentSpec parse_experiment_json(const json& j, const std::string& base_dir) {
    if (!j.is_object()) fail("config: expected a JSON object");
    check_keys(j,
               {"topology", "events", "protocol", "protocols", "pipeline", "channel",
                "traffic", "slots", "seed", "seeds"},
               "config");
    ExperimentSpec spec;
    if (!j.contains("topology")) fail("config: missing 'topology'");
    spec.topology = parse_topology_spec(j.at("topology"), base_dir);

    if (j.contains("events")) {
        fs::path p = j.at("events").get<std::string>();
        if (p.is_relative()) p = fs::path(base_dir) / p;
        spec.events_path = p.string();
    }

    if (j.contains("protocol") && j.contains("protocols"))
        fail("config: give either 'protocol' or 'protocols', not both");
    if (j.contains("protocol") || j.contains("protocols")) {
        spec.protocols.clear();
        const json& pv = j.contains("protocol") ? j.at("protocol") : j.at("protocols");
        for (const std::string& s : scalar_or_array<std::string>(pv, "protocols"))
            spec.protocols.push_back(protocol_from_string(s));
    }

    if (j.contains("pipeline")) {
        const json& p = j.at("pipeline");
        check_keys(p, {"M", "G", "S", "L"}, "pipeline");
        if (p.contains("M")) spec.depth_values = scalar_or_array<std::uint32_t>(p.at("M"), "pipeline.M");
        if (p.contains("G")) spec.pipeline_base.snapshot_period_g = p.at("G").get<std::uint32_t>();
        if (p.contains("S")) spec.pipeline_base.subslots_s = p.at("S").get<std::uint32_t>();
        if (p.contains("L")) spec.pipeline_base.neighbor_capacity_l = p.at("L").get<std::uint32_t>();
    }

    if (j.contains("channel")) {
        const json& c = j.at("channel");
        check_keys(c, {"delivery_prob"}, "channel");
        if (c.contains("delivery_prob"))
            spec.delivery_probs = scalar_or_array<double>(c.at("delivery_prob"),
                                                          "channel.delivery_prob");
    }

    if (j.contains("traffic")) {
        const json& tr = j.at("traffic");
        check_keys(tr, {"lambda", "queue_capacity"}, "traffic");
        if (tr.contains("lambda")) spec.traffic.arrival_prob = tr.at("lambda").get<double>();
        if (tr.contains("queue_capacity"))
            spec.traffic.queue_capacity = tr.at("queue_capacity").get<std::uint64_t>();
    }

    if (j.contains("slots")) spec.slots = j.at("slots").get<Slot>();

    if (j.contains("seed") && j.contains("seeds"))
        fail("config: give either 'seed' or 'seeds', not both");
    if (j.contains("seed") || j.contains("seeds")) {
        const json& sv = j.contains("seed") ? j.at("seed") : j.at("seeds");
        spec.seeds = scalar_or_array<std::uint64_t>(sv, "seeds");
    }

    // Validate every grid point before running anything.
    if (spec.slots < 1) fail("slots must be >= 1");
    if (spec.traffic.arrival_prob < 0.0 || spec.traffic.arrival_prob > 1.0)
        fail("traffic.lambda must be in [0,1]");
    for (double p : spec.delivery_probs)
        if (p < 0.0 || p > 1.0) fail("channel.delivery_prob must be in [0,1]");
    for (std::uint32_t m : spec.depth_values) {
        PipelineConfig pc = spec.pipeline_base;
        pc.depth_m = m;
        pc.validate();
    }
    if (spec.topology.kind == TopologySpec::Kind::File && !fs::exists(spec.topology.path))
        fail("topology file not found: " + spec.topology.path);
    if (!spec.events_path.empty() && !fs::exists(spec.events_path))
        fail("event file not found: " + spec.events_path);
    return spec;
}

ExperimentSpec parse_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail("config parse error in " + path + ": " + e.what());
    }
    return parse_experiment_json(j, fs::path(path).parent_path().string());
}

json experiment_to_json(const ExperimentSpec& spec) {
    json j;
    j["topology"] = topology_spec_to_json(spec.topology);
    if (!spec.events_path.empty()) j["events"] = spec.events_path;
    json protos = json::array();
    for (Protocol p : spec.protocols) protos.push_back(to_string(p));
    j["protocols"] = protos;
    j["pipeline"] = {{"M", spec.depth_values},
                     {"G", spec.pipeline_base.snapshot_period_g},
                     {"S", spec.pipeline_base.subslots_s},
                     {"L", spec.pipeline_base.neighbor_capacity_l}};
    j["channel"] = {{"delivery_prob", spec.delivery_probs}};
    j["traffic"] = {{"lambda", spec.traffic.arrival_prob},
                    {"queue_capacity", spec.traffic.queue_capacity}};
    j["slots"] = spec.slots;
    j["seeds"] = spec.seeds;
    return j;
}

int run_experiment(const ExperimentSpec& spec, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const ConflictGraph topo = generate_topology(spec.topology);
    const std::vector<GraphEvent> events =
        spec.events_path.empty() ? std::vector<GraphEvent>{} : load_events(spec.events_path);

    std::vector<RunPoint> points = spec.grid();
    std::vector<RunOutcome> outcomes(points.size());

    // Grid points are independent; one worker per run.
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(points.size()); ++i) {
        RunOutcome& out = outcomes[i];
        out.point = points[i];
        try {
            SimulationConfig cfg = spec.materialize(topo, events, points[i]);
            Metrics metrics = run_simulation(cfg);
            std::ofstream csv(fs::path(out_dir) / (points[i].label() + ".csv"));
            write_metrics_csv(metrics, points[i].protocol, csv);
            out.summary = run_summary_json(spec, points[i], metrics);
            std::ofstream js(fs::path(out_dir) / (points[i].label() + ".json"));
            js << out.summary.dump(2) << "\n";
            out.ok = true;
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    }

    std::vector<json> run_summaries;
    int failures = 0;
    for (const RunOutcome& out : outcomes) {
        if (out.ok) {
            run_summaries.push_back(out.summary);
        } else {
            ++failures;
            std::cerr << "run " << out.point.label() << " failed: " << out.error << "\n";
        }
    }

    json summary = aggregate_summaries(run_summaries);
    summary["config"] = experiment_to_json(spec);
    summary["failed_runs"] = failures;
    std::ofstream js(fs::path(out_dir) / "summary.json");
    js << summary.dump(2) << "\n";
    return failures == 0 ? 0 : 1;
}

int summarize_directory(const std::string& dir) {
    if (!fs::is_directory(dir)) fail("not a directory: " + dir);
    std::vector<json> runs;
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json" && entry.path().filename() != "summary.json")
            paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    for (const fs::path& p : paths) {
        std::ifstream in(p);
        json j;
        in >> j;
        if (j.contains("protocol")) runs.push_back(j);
    }
    json summary = aggregate_summaries(runs);
    std::ofstream js(fs::path(dir) / "summary.json");
    js << summary.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
    return 0;
}

}  // namespace onama
