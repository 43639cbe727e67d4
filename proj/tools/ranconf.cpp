#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ranconf/catalog.hpp"
#include "ranconf/evaluation.hpp"
#include "ranconf/graph.hpp"
#include "ranconf/mitigation.hpp"
#include "ranconf/sandbox.hpp"

namespace {

using namespace ranconf;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConflicts = 2;

std::set<std::string> split_set(const std::string& csv) {
    std::set<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.insert(item);
    return out;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

// "key=value,key=value" pairs
std::map<std::string, double> parse_kv(const std::string& csv, const char* what) {
    std::map<std::string, double> out;
    for (const auto& item : split_list(csv)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InputError(std::string(what) + ": expected key=value, got '" + item +
                             "'");
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

Aggregator make_aggregator(const std::string& name,
                           const std::map<std::string, double>& weights) {
    Aggregator agg;
    if (name == "mean")
        agg.kind = AggKind::WeightedMean;
    else if (name == "median")
        agg.kind = AggKind::Median;
    else if (name == "max")
        agg.kind = AggKind::Max;
    else
        throw InputError("unknown aggregator '" + name + "'");
    agg.weights = weights;
    return agg;
}

Metric make_metric(const std::string& name) {
    if (name == "ks") return Metric::Ks;
    if (name == "int") return Metric::Int;
    throw InputError("unknown metric '" + name + "' (expected ks or int)");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

int cmd_profile(const std::string& scenario_path, const std::string& catalog_path,
                const std::string& out_path, std::uint64_t seed,
                std::uint64_t n_ticks_override) {
    const auto scenario = sandbox::Scenario::from_json([&] {
        std::ifstream in(scenario_path);
        if (!in) throw InputError("scenario: cannot open '" + scenario_path + "'");
        nlohmann::json doc;
        in >> doc;
        return doc;
    }());
    if (scenario.xapps.empty()) throw InputError("scenario lists no xapps");
    const std::uint64_t n_ticks = n_ticks_override ? n_ticks_override : scenario.n_ticks;
    if (n_ticks < 3000)
        std::cerr << "warning: " << n_ticks
                  << " ticks is below the recommended 3000-sample sufficiency "
                     "threshold\n";

    Catalog cat = catalog_path.empty() ? Catalog{} : Catalog::load_file(catalog_path);
    cat = cat.with_condition(scenario.condition);
    for (int s = 0; s < sandbox::kNumSlices; ++s) {
        const std::string slice = sandbox::kSliceNames[s];
        cat = cat.with_variable({slice + "_prbs", VarKind::Parameter,
                                 ValueType::Numeric, "prbs",
                                 std::pair<double, double>{0.0, 36.0}});
        cat = cat.with_variable(
            {slice + "_throughput", VarKind::Kpm, ValueType::Numeric, "mbps", {}});
        cat = cat.with_variable(
            {slice + "_buffer", VarKind::Kpm, ValueType::Numeric, "bytes", {}});
    }
    std::set<std::string> params;
    for (int s = 0; s < sandbox::kNumSlices; ++s)
        params.insert(std::string(sandbox::kSliceNames[s]) + "_prbs");

    std::uint64_t app_index = 0;
    for (const auto& x : scenario.xapps) {
        const auto profile =
            sandbox::run_profile(x, scenario.condition.id, scenario.model, n_ticks,
                                 seed + app_index, scenario.budget, scenario.rbg_size);
        cat = cat.with_profile(x.id, params, x.priority, profile);
        std::cout << x.id << ": " << n_ticks << " samples per variable\n";
        ++app_index;
    }

    // sufficiency summary on the first xapp's eMBB PRB draws
    {
        std::mt19937_64 rng(seed);
        std::vector<double> draws;
        draws.reserve(n_ticks);
        for (std::uint64_t t = 0; t < n_ticks; ++t)
            draws.push_back(sandbox::draw_policy(scenario.xapps.front(), rng,
                                                 scenario.budget, scenario.rbg_size)
                                .prbs[0]);
        std::vector<std::uint64_t> sizes;
        for (std::uint64_t s : {std::uint64_t{500}, std::uint64_t{3000},
                                std::uint64_t{10000}, n_ticks})
            if (s <= n_ticks && (sizes.empty() || sizes.back() != s))
                sizes.push_back(s);
        std::cout << "sufficiency (" << scenario.xapps.front().id << " embb_prbs):";
        for (const auto& [size, d] : sufficiency_curve(draws, sizes, seed))
            std::cout << " N=" << size << " ks=" << d;
        std::cout << '\n';
    }

    write_text(out_path, cat.to_json().dump(1) + "\n");
    std::cout << "catalog written to " << out_path << '\n';
    return kExitOk;
}

int cmd_detect(const std::string& catalog_path, const std::string& graph_path,
               const std::set<std::string>& apps, const std::string& out_path) {
    const Catalog cat = Catalog::load_file(catalog_path);
    const ConflictGraph graph = ConflictGraph::load_file(graph_path, cat);
    const AugmentedGraph aug = build_augmented(cat, graph, apps);
    const DetectionResult det = detect_all(aug);

    nlohmann::json j;
    j["direct"] = nlohmann::json::object();
    for (const auto& [p, a] : det.direct) j["direct"][p] = a;
    j["parameter"] = nlohmann::json::object();
    for (const auto& [p, a] : det.parameter) j["parameter"][p] = a;
    j["kpm"] = nlohmann::json::object();
    for (const auto& [k, a] : det.kpm) j["kpm"][k] = a;
    j["parameter_influencers_aux"] = nlohmann::json::object();
    for (const auto& [p, a] : det.parameter_influencers)
        j["parameter_influencers_aux"][p] = a;

    const std::string text = j.dump(1) + "\n";
    std::cout << text;
    if (!out_path.empty()) write_text(out_path, text);
    return det.any() ? kExitConflicts : kExitOk;
}

int cmd_evaluate(const std::string& catalog_path, const std::string& graph_path,
                 const std::set<std::string>& apps, const std::string& condition,
                 const std::set<std::string>& focus_kpms,
                 const std::set<std::string>& focus_params, const std::string& metric,
                 const std::string& agg_name,
                 const std::map<std::string, double>& weights,
                 const std::string& out_path, const std::string& csv_path) {
    const Catalog cat = Catalog::load_file(catalog_path);
    const ConflictGraph graph = ConflictGraph::load_file(graph_path, cat);
    KpmFocus focus{focus_params, focus_kpms};
    const auto report = generate_report(cat, graph, apps, condition, focus,
                                        make_aggregator(agg_name, weights),
                                        make_metric(metric));
    const std::string text = report.dump(1) + "\n";
    std::cout << text;
    if (!out_path.empty()) write_text(out_path, text);
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw InputError("cannot write '" + csv_path + "'");
        write_ecdf_csv(cat, csv);
    }
    return kExitOk;
}

int cmd_mitigate(const std::string& catalog_path, const std::set<std::string>& apps,
                 const std::string& condition, const std::set<std::string>& focus_kpms,
                 const std::string& metric, const std::string& agg_name,
                 const std::map<std::string, double>& weights, double tol,
                 const std::map<std::string, double>& per_kpm_tol,
                 const std::map<std::string, double>& priority_overrides,
                 const std::set<std::string>& predeployed,
                 const std::string& out_path) {
    const Catalog cat = Catalog::load_file(catalog_path);
    if (focus_kpms.empty()) throw InputError("mitigate: --focus-kpms must be non-empty");

    std::set<std::string> all = apps;
    all.insert(predeployed.begin(), predeployed.end());
    const auto sev = severity_matrix(cat, all, condition, focus_kpms,
                                     make_aggregator(agg_name, weights),
                                     make_metric(metric));
    std::map<AppPair, std::map<std::string, double>> per_kpm;
    if (!per_kpm_tol.empty()) {
        for (auto i = all.begin(); i != all.end(); ++i)
            for (auto j = std::next(i); j != all.end(); ++j) {
                const auto vec = distance_vector(cat, *i, *j, condition, focus_kpms);
                auto& entry = per_kpm[make_pair_key(*i, *j)];
                for (const auto& [var, d] : vec.entries)
                    entry[var] = d.select(make_metric(metric));
            }
    }

    std::map<std::string, double> priorities;
    for (const auto& a : all) priorities[a] = cat.app(a).priority;
    for (const auto& [a, p] : priority_overrides) priorities[a] = p;

    TolerancePolicy policy;
    policy.global = tol;
    policy.per_kpm = per_kpm_tol;
    const auto plan = greedy_deploy(apps, priorities, sev, policy, predeployed,
                                    per_kpm_tol.empty() ? nullptr : &per_kpm);

    // admit/reject table
    const auto coex = coexistence_matrix(sev, policy);
    std::cout << "pairwise coexistence at tol " << tol << ":\n";
    for (const auto& [pair, ok] : coex)
        if (pair.first != pair.second)
            std::cout << "  (" << pair.first << "," << pair.second << ") sigma="
                      << sev.at(pair) << (ok ? "  ok" : "  conflict") << '\n';
    std::cout << "deployed:";
    for (const auto& a : plan.deployed) std::cout << ' ' << a;
    std::cout << '\n';
    for (const auto& r : plan.rejected)
        std::cout << "rejected " << r.app << " (blocked by " << r.blocking_app
                  << ", severity " << r.blocking_severity << ")\n";

    if (!out_path.empty()) write_text(out_path, plan.to_json().dump(1) + "\n");
    return kExitOk;
}

int cmd_simulate(const std::string& scenario_path, const std::string& phases_csv,
                 std::uint64_t n_ticks_override, std::uint64_t seed,
                 const std::string& out_dir) {
    const auto scenario = sandbox::Scenario::load_file(scenario_path);
    const std::uint64_t n_ticks = n_ticks_override ? n_ticks_override : scenario.n_ticks;
    const auto phases = split_list(phases_csv);
    if (phases.empty()) throw InputError("simulate: no phases given");
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

    // resolve every phase before printing anything, so bad references fail clean
    std::vector<std::vector<sandbox::StochasticXapp>> phase_xapps;
    for (const auto& phase : phases) {
        std::vector<sandbox::StochasticXapp> xapps;
        std::stringstream ss(phase);
        std::string name;
        while (std::getline(ss, name, '+')) xapps.push_back(scenario.xapp(name));
        if (xapps.empty()) throw InputError("simulate: empty phase '" + phase + "'");
        phase_xapps.push_back(std::move(xapps));
    }

    std::cout << "phase,slice,cov,stdev,rmssd\n";
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const auto& phase = phases[i];
        const auto series = sandbox::coexist_sim(phase_xapps[i], scenario.model, n_ticks, seed,
                                                 scenario.budget, scenario.rbg_size);
        for (int s = 0; s < sandbox::kNumSlices; ++s) {
            const auto m = sandbox::stability_metrics(series.prbs[s]);
            std::cout << phase << ',' << sandbox::kSliceNames[s] << ',' << m.cov << ','
                      << m.stdev << ',' << m.rmssd << '\n';
        }
        if (!out_dir.empty()) {
            std::ofstream csv(out_dir + "/" + phase + ".csv");
            if (!csv) throw InputError("cannot write phase CSV in '" + out_dir + "'");
            csv << "tick,slice,prbs,throughput_mbps,buffer_bytes\n";
            for (std::uint64_t t = 0; t < n_ticks; ++t)
                for (int s = 0; s < sandbox::kNumSlices; ++s)
                    csv << t << ',' << sandbox::kSliceNames[s] << ','
                        << series.prbs[s][t] << ',' << series.throughput_mbps[s][t]
                        << ',' << series.buffer_bytes[s][t] << '\n';
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conflict management engine for multi-agent RAN control apps"};
    app.require_subcommand(1);

    std::string catalog_path, graph_path, scenario_path, condition, out_path;
    std::string csv_path, apps_csv, focus_kpms_csv, focus_params_csv, phases_csv;
    std::string metric = "int", agg = "mean";
    std::string weights_csv, priorities_csv, per_kpm_tol_csv, predeployed_csv;
    double tol = 1.0;
    std::uint64_t seed = 1, n_ticks = 0;

    auto* profile = app.add_subcommand("profile", "profile xapps in the sandbox");
    profile->add_option("--scenario", scenario_path)->required();
    profile->add_option("--catalog", catalog_path, "existing catalog to merge into");
    profile->add_option("--out", out_path)->required();
    profile->add_option("--seed", seed);
    profile->add_option("--ticks", n_ticks, "override scenario tick count");

    auto* detect = app.add_subcommand("detect", "detect conflicts");
    detect->add_option("--catalog", catalog_path)->required();
    detect->add_option("--graph", graph_path)->required();
    detect->add_option("--apps", apps_csv)->required();
    detect->add_option("--out", out_path);

    auto* evaluate = app.add_subcommand("evaluate", "evaluate conflict severity");
    evaluate->add_option("--catalog", catalog_path)->required();
    evaluate->add_option("--graph", graph_path)->required();
    evaluate->add_option("--apps", apps_csv)->required();
    evaluate->add_option("--condition", condition)->required();
    evaluate->add_option("--focus-kpms", focus_kpms_csv)->required();
    evaluate->add_option("--focus-params", focus_params_csv);
    evaluate->add_option("--metric", metric, "ks|int");
    evaluate->add_option("--agg", agg, "mean|median|max");
    evaluate->add_option("--weights", weights_csv, "var=weight,...");
    evaluate->add_option("--out", out_path);
    evaluate->add_option("--ecdf-csv", csv_path, "dump ECDF step curves");

    auto* mitigate = app.add_subcommand("mitigate", "plan deployment under tolerance");
    mitigate->add_option("--catalog", catalog_path)->required();
    mitigate->add_option("--apps", apps_csv)->required();
    mitigate->add_option("--condition", condition)->required();
    mitigate->add_option("--focus-kpms", focus_kpms_csv)->required();
    mitigate->add_option("--metric", metric);
    mitigate->add_option("--agg", agg);
    mitigate->add_option("--weights", weights_csv);
    mitigate->add_option("--tol", tol, "global severity tolerance");
    mitigate->add_option("--kpm-tol", per_kpm_tol_csv, "kpm=threshold,...");
    mitigate->add_option("--priorities", priorities_csv, "app=priority,...");
    mitigate->add_option("--predeployed", predeployed_csv);
    mitigate->add_option("--out", out_path);

    auto* simulate = app.add_subcommand("simulate", "coexistence stability analysis");
    simulate->add_option("--scenario", scenario_path)->required();
    simulate->add_option("--phases", phases_csv, "e.g. a1+a2,a1+a3")->required();
    simulate->add_option("--ticks", n_ticks);
    simulate->add_option("--seed", seed);
    simulate->add_option("--out", out_path, "directory for per-phase CSV series");

    CLI11_PARSE(app, argc, argv);

    try {
        if (profile->parsed())
            return cmd_profile(scenario_path, catalog_path, out_path, seed, n_ticks);
        if (detect->parsed())
            return cmd_detect(catalog_path, graph_path, split_set(apps_csv), out_path);
        if (evaluate->parsed()) {
            const auto focus = split_set(focus_kpms_csv);
            if (focus.empty()) throw InputError("evaluate: --focus-kpms is empty");
            return cmd_evaluate(catalog_path, graph_path, split_set(apps_csv), condition,
                                focus, split_set(focus_params_csv), metric, agg,
                                parse_kv(weights_csv, "weights"), out_path, csv_path);
        }
        if (mitigate->parsed())
            return cmd_mitigate(catalog_path, split_set(apps_csv), condition,
                                split_set(focus_kpms_csv), metric, agg,
                                parse_kv(weights_csv, "weights"), tol,
                                parse_kv(per_kpm_tol_csv, "kpm-tol"),
                                parse_kv(priorities_csv, "priorities"),
                                split_set(predeployed_csv), out_path);
        if (simulate->parsed())
            return cmd_simulate(scenario_path, phases_csv, n_ticks, seed, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
