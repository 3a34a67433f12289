// Command-line surface for the sandpile laboratory. All results print as a
// single JSON report on stdout; diagnostics go to stderr. Exit codes are a
// stable contract: 0 success, 1 input error, 2 resource/bounds exceeded,
// 3 invariant violation.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sandpile/graph_json.hpp"
#include "sandpile/lacking.hpp"
#include "sandpile/recurrent.hpp"
#include "sandpile/verify.hpp"

namespace {

using nlohmann::json;
using namespace sandpile;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitBounds = 2;
constexpr int kExitInvariant = 3;

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::TooManyEdges:
        case Errc::StateSpaceTooLarge:
        case Errc::SafetyCapExceeded:
            return kExitBounds;
        case Errc::IrreducibleComponent:
            return kExitInvariant;
        default:
            return kExitInput;
    }
}

struct Report {
    json body;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    explicit Report(const std::string& command) { body["command"] = command; }

    void input_file(const std::string& path, const std::string& content) {
        body["input"] = {{"path", path}, {"digest", fnv1a_hex(content)}};
    }

    int finish(int code, bool human, const std::string& human_text = "") {
        const auto elapsed = std::chrono::steady_clock::now() - started;
        body["timing_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
        if (human && !human_text.empty())
            std::cout << human_text << std::endl;
        else
            std::cout << body.dump(2) << std::endl;
        return code;
    }

    int fail_with(const Error& err, bool human) {
        body["error"] = {{"code", errc_name(err.code())}, {"message", err.what()}};
        std::cerr << err.what() << std::endl;
        return finish(exit_code_for(err.code()), human, std::string("error: ") + err.what());
    }
};

MultiGraph load_input(Report& report, const std::string& path) {
    const std::string content = read_file(path);
    report.input_file(path, content);
    json j = json::parse(content, nullptr, false);
    if (j.is_discarded()) fail(Errc::BadInput, "'" + path + "' is not valid JSON");
    return graph_from_json(j);
}

Config parse_config_csv(const MultiGraph& g, const std::string& csv) {
    Config eta;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            eta.push_back(std::stoi(item));
        } catch (const std::exception&) {
            fail(Errc::BadInput, "bad grain count '" + item + "'");
        }
    }
    check_config(g, eta);
    return eta;
}

long long max_topplings_from_env() {
    if (const char* env = std::getenv("SANDPILE_MAX_TOPPLINGS")) {
        try {
            return std::stoll(env);
        } catch (const std::exception&) {
            fail(Errc::BadInput, "SANDPILE_MAX_TOPPLINGS is not an integer");
        }
    }
    return StochasticParams{}.max_topplings;
}

std::string render_configs(const std::set<Config>& configs) {
    std::string out;
    for (const Config& eta : configs) {
        out += out.empty() ? "" : " ";
        out += json(eta).dump();
    }
    return out;
}

int cmd_validate(const std::string& path, bool human) {
    Report report("validate");
    try {
        const MultiGraph g = load_input(report, path);
        json degrees;
        for (VertexId v = 0; v < g.vertex_count(); ++v) degrees[g.label(v)] = g.degree(v);
        report.body["result"] = {{"sink", g.label(MultiGraph::sink)},
                                 {"vertices", g.vertex_count()},
                                 {"nonsink_vertices", g.nonsink_count()},
                                 {"edges", g.edge_count()},
                                 {"cycle_count", g.cycle_count()},
                                 {"degrees", degrees}};
        std::ostringstream text;
        text << "ok: " << g.vertex_count() << " vertices (sink " << g.label(MultiGraph::sink) << "), "
             << g.edge_count() << " edges";
        return report.finish(kExitOk, human, text.str());
    } catch (const Error& err) {
        return report.fail_with(err, human);
    }
}

int cmd_recurrent(const std::string& path, const std::string& model, bool count_only, bool human) {
    Report report("recurrent");
    try {
        const MultiGraph g = load_input(report, path);
        const std::set<Config> configs = model == "det" ? det_recurrent_set(g) : sto_recurrent_set(g);
        json result = {{"model", model}, {"count", configs.size()}};
        if (!count_only) {
            result["configurations"] = config_set_to_json(configs);
            json order = json::array();
            for (VertexId v = 1; v < g.vertex_count(); ++v) order.push_back(g.label(v));
            result["vertex_order"] = order;
        }
        report.body["result"] = result;
        return report.finish(kExitOk, human,
                             model + " recurrent: " + std::to_string(configs.size()) +
                                 (count_only ? "" : "\n" + render_configs(configs)));
    } catch (const Error& err) {
        return report.fail_with(err, human);
    }
}

int cmd_member(const std::string& path, const std::string& csv, const std::string& model, bool human) {
    Report report("member");
    try {
        const MultiGraph g = load_input(report, path);
        const Config eta = parse_config_csv(g, csv);
        report.body["config"] = eta;
        json result = {{"model", model}};
        bool member = false;
        if (model == "det") {
            const BurnResult burn = burning_test(g, eta);
            member = burn.recurrent;
            json order = json::array();
            for (VertexId v : burn.order) order.push_back(g.label(v));
            result["member"] = member;
            result["burn_order"] = order;
        } else {
            const SrTest t = is_sto_recurrent(g, eta);
            member = t.recurrent;
            result["member"] = member;
            if (t.witness) result["witness_orientation"] = orientation_arrows(g, *t.witness);
        }
        report.body["result"] = result;
        return report.finish(kExitOk, human, std::string(member ? "yes" : "no"));
    } catch (const Error& err) {
        return report.fail_with(err, human);
    }
}

int cmd_poly(const std::string& path, const std::string& method, bool human) {
    Report report("poly");
    try {
        const MultiGraph g = load_input(report, path);
        std::optional<Polynomial> by_enum, by_rec;
        if (method == "enumerate" || method == "both") by_enum = lacking_poly_enum(g);
        if (method == "recurrence" || method == "both") by_rec = lacking_poly_recurrence(g);
        const Polynomial& poly = by_rec ? *by_rec : *by_enum;

        json result = polynomial_to_json(poly);
        result["method"] = method;
        result["count_at_one"] = bigint_to_json(poly.eval(1));
        if (method == "both") {
            const bool agree = *by_enum == *by_rec;
            result["methods_agree"] = agree;
            report.body["result"] = result;
            if (!agree) {
                report.body["error"] = {{"code", "MethodDisagreement"},
                                        {"message", "enumeration and recurrence disagree"}};
                return report.finish(kExitInvariant, human, "method disagreement");
            }
            return report.finish(kExitOk, human, poly.to_string());
        }
        report.body["result"] = result;
        return report.finish(kExitOk, human, poly.to_string());
    } catch (const Error& err) {
        return report.fail_with(err, human);
    }
}

int cmd_simulate(const std::string& path, double p, long long steps, long long burnin, std::uint64_t seed,
                 const std::string& mu_spec, const std::string& policy, bool human) {
    Report report("simulate");
    try {
        const MultiGraph g = load_input(report, path);
        StochasticParams params;
        params.p = p;
        params.seed = seed;
        params.max_topplings = max_topplings_from_env();
        params.policy = policy == "random" ? TopplePolicy::RandomEligible : TopplePolicy::Fifo;
        if (!mu_spec.empty() && mu_spec != "uniform") {
            std::stringstream ss(mu_spec);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    params.mu.push_back(std::stod(item));
                } catch (const std::exception&) {
                    fail(Errc::BadInput, "bad mu weight '" + item + "'");
                }
            }
        }

        const ChainStats stats = run_chain(g, max_stable(g), params, steps, burnin);
        json result = chain_stats_to_json(stats);

        if (g.edge_count() <= kEnumerationEdgeBound) {
            const std::set<Config> sto = sto_recurrent_set(g);
            std::set<Config> support;
            for (const auto& [eta, count] : stats.occupancy) support.insert(eta);
            result["support"] = {
                {"size", support.size()},
                {"subset_of_sto", std::includes(sto.begin(), sto.end(), support.begin(), support.end())},
                {"equals_sto", support == sto}};
        }
        report.body["result"] = result;
        std::ostringstream text;
        text << "steps " << steps << ", states visited " << stats.occupancy.size() << ", grains to sink "
             << stats.grains_to_sink;
        return report.finish(kExitOk, human, text.str());
    } catch (const Error& err) {
        return report.fail_with(err, human);
    }
}

int cmd_verify(const std::string& path, int random_graphs, int max_edges, std::uint64_t seed,
               bool corrupt_oracle, bool human) {
    Report report("verify");
    try {
        VerifyOptions opt;
        opt.corrupt_enum_oracle = corrupt_oracle;
        std::vector<CheckResult> checks;
        if (!path.empty()) {
            const MultiGraph g = load_input(report, path);
            checks = verify_graph(g, opt, seed);
            report.body["params"] = {{"seed", seed}};
        } else {
            checks = verify_random(random_graphs, max_edges, seed, opt);
            report.body["params"] = {{"random", random_graphs}, {"max_edges", max_edges}, {"seed", seed}};
        }

        json listing = json::array();
        json counterexamples = json::array();
        int failures = 0;
        for (const CheckResult& r : checks) {
            listing.push_back({{"name", r.name}, {"pass", r.pass}});
            if (!r.pass) {
                ++failures;
                counterexamples.push_back({{"name", r.name}, {"detail", r.detail}});
            }
        }
        report.body["result"] = {{"checks_run", checks.size()},
                                 {"failures", failures},
                                 {"all_pass", failures == 0},
                                 {"checks", listing},
                                 {"counterexamples", counterexamples}};
        std::ostringstream text;
        text << (failures == 0 ? "all checks passed" : "FAILURES") << " (" << checks.size() << " checks)";
        return report.finish(failures == 0 ? kExitOk : kExitInvariant, human, text.str());
    } catch (const Error& err) {
        return report.fail_with(err, human);
    }
}

int cmd_count_trees(const std::string& path, bool human) {
    Report report("count-trees");
    try {
        const MultiGraph g = load_input(report, path);
        const BigInt trees = spanning_tree_count(g);
        report.body["result"] = {{"spanning_trees", bigint_to_json(trees)}};
        return report.finish(kExitOk, human, trees.str());
    } catch (const Error& err) {
        return report.fail_with(err, human);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact laboratory for sandpile recurrence on sink-rooted multigraphs"};
    app.require_subcommand(1);
    bool human = false;
    app.add_flag("--human", human, "human-readable output instead of JSON");

    std::string graph_path, model = "sto", config_csv, method = "both", mu_spec = "uniform";
    std::string policy = "fifo";
    bool list_flag = false, count_flag = false, corrupt_oracle = false;
    double p = 1.0;
    long long steps = 1000, burnin = 0;
    std::uint64_t seed = 0;
    int random_graphs = 0, max_edges = 7;

    auto* validate = app.add_subcommand("validate", "check and summarise a graph file");
    validate->add_option("graph", graph_path, "graph JSON file")->required();

    auto* recurrent = app.add_subcommand("recurrent", "enumerate recurrent configurations");
    recurrent->add_option("graph", graph_path)->required();
    recurrent->add_option("--model", model, "det or sto")->check(CLI::IsMember({"det", "sto"}));
    recurrent->add_flag("--list", list_flag, "list configurations (default)");
    recurrent->add_flag("--count", count_flag, "count only");

    auto* member = app.add_subcommand("member", "test one configuration for recurrence");
    member->add_option("graph", graph_path)->required();
    member->add_option("--config", config_csv, "comma-separated grain counts")->required();
    member->add_option("--model", model, "det or sto")->check(CLI::IsMember({"det", "sto"}));

    auto* poly = app.add_subcommand("poly", "lacking polynomial");
    poly->add_option("graph", graph_path)->required();
    poly->add_option("--method", method, "recurrence, enumerate or both")
        ->check(CLI::IsMember({"recurrence", "enumerate", "both"}));

    auto* simulate = app.add_subcommand("simulate", "run the seeded stochastic chain");
    simulate->add_option("graph", graph_path)->required();
    simulate->add_option("--p", p, "per-edge transfer probability in (0,1]");
    simulate->add_option("--steps", steps, "grain additions to record");
    simulate->add_option("--burnin", burnin, "grain additions to discard first");
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--mu", mu_spec, "'uniform' or comma-separated positive weights");
    simulate->add_option("--policy", policy, "toppling order: fifo or random")
        ->check(CLI::IsMember({"fifo", "random"}));

    auto* verify = app.add_subcommand("verify", "run the cross-module invariant suite");
    verify->add_option("graph", graph_path, "verify one graph file");
    verify->add_option("--random", random_graphs, "verify N seeded random graphs");
    verify->add_option("--max-edges", max_edges, "edge bound for random graphs");
    verify->add_option("--seed", seed, "campaign seed");
    verify->add_flag("--corrupt-oracle", corrupt_oracle, "test hook: sabotage one oracle")
        ->group("");  // hidden

    auto* count_trees = app.add_subcommand("count-trees", "exact spanning tree count");
    count_trees->add_option("graph", graph_path)->required();

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) return cmd_validate(graph_path, human);
    if (recurrent->parsed()) return cmd_recurrent(graph_path, model, count_flag && !list_flag, human);
    if (member->parsed()) return cmd_member(graph_path, config_csv, model, human);
    if (poly->parsed()) return cmd_poly(graph_path, method, human);
    if (simulate->parsed()) return cmd_simulate(graph_path, p, steps, burnin, seed, mu_spec, policy, human);
    if (verify->parsed()) {
        if (graph_path.empty() && random_graphs <= 0) {
            std::cerr << "verify needs a graph file or --random N" << std::endl;
            return kExitInput;
        }
        return cmd_verify(graph_path, random_graphs, max_edges, seed, corrupt_oracle, human);
    }
    if (count_trees->parsed()) return cmd_count_trees(graph_path, human);
    return kExitInput;
}
