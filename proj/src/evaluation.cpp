#include "ranconf/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <vector>

namespace ranconf {

AppPair make_pair_key(const std::string& a, const std::string& b) {
    return a <= b ? AppPair{a, b} : AppPair{b, a};
}

double VarDistance::select(Metric metric) const {
    if (chi) return *chi;  // categorical variables have a single metric
    if (metric == Metric::Ks) {
        if (ks) return *ks;
    } else if (integral) {
        return *integral;
    }
    throw InputError("distance entry does not carry the requested metric");
}

DistanceVector distance_vector(const Catalog& catalog, const std::string& a1,
                               const std::string& a2, const std::string& condition,
                               const std::set<std::string>& variables) {
    const StatisticalProfile& p1 = catalog.profile_of(a1, condition);
    const StatisticalProfile& p2 = catalog.profile_of(a2, condition);
    DistanceVector vec;
    vec.pair = make_pair_key(a1, a2);
    vec.condition = condition;
    for (const auto& var : variables) {
        auto i1 = p1.distributions.find(var);
        auto i2 = p2.distributions.find(var);
        if (i1 == p1.distributions.end())
            throw InputError("variable '" + var + "' missing from profile of '" + a1 +
                             "' under condition '" + condition + "'");
        if (i2 == p2.distributions.end())
            throw InputError("variable '" + var + "' missing from profile of '" + a2 +
                             "' under condition '" + condition + "'");
        VarDistance d;
        if (const auto* e1 = std::get_if<Ecdf>(&i1->second)) {
            const auto* e2 = std::get_if<Ecdf>(&i2->second);
            if (!e2)
                throw InputError("variable '" + var + "' is numeric for '" + a1 +
                                 "' but categorical for '" + a2 + "'");
            d.ks = ks_distance(*e1, *e2).value;
            d.integral = int_distance(*e1, *e2, catalog.variable(var).range).value;
        } else {
            const auto* c2 = std::get_if<CategoricalDist>(&i2->second);
            if (!c2)
                throw InputError("variable '" + var + "' is categorical for '" + a1 +
                                 "' but numeric for '" + a2 + "'");
            d.chi = chi_distance(std::get<CategoricalDist>(i1->second), *c2).value;
        }
        vec.entries[var] = d;
    }
    return vec;
}

double severity(const DistanceVector& vec, const std::set<std::string>& focus,
                const Aggregator& agg, Metric metric) {
    if (focus.empty()) throw InputError("severity: empty focus set");
    std::vector<double> values;
    values.reserve(focus.size());
    double weighted_sum = 0.0, weight_sum = 0.0;
    for (const auto& var : focus) {
        auto it = vec.entries.find(var);
        if (it == vec.entries.end())
            throw InputError("severity: focus variable '" + var +
                             "' absent from the distance vector");
        const double v = it->second.select(metric);
        values.push_back(v);
        if (agg.kind == AggKind::WeightedMean) {
            double w = 1.0;
            if (!agg.weights.empty()) {
                auto wit = agg.weights.find(var);
                if (wit == agg.weights.end())
                    throw InputError("severity: no weight given for variable '" + var + "'");
                if (wit->second < 0.0)
                    throw InputError("severity: negative weight for variable '" + var + "'");
                w = wit->second;
            }
            weighted_sum += w * v;
            weight_sum += w;
        }
    }
    switch (agg.kind) {
        case AggKind::WeightedMean:
            if (weight_sum <= 0.0)
                throw InputError("severity: weights sum to zero over the focus set");
            return weighted_sum / weight_sum;
        case AggKind::Median: {
            std::sort(values.begin(), values.end());
            return values[(values.size() - 1) / 2];  // lower median
        }
        case AggKind::Max:
            return *std::max_element(values.begin(), values.end());
    }
    throw InputError("severity: unknown aggregator");
}

std::map<AppPair, double> severity_matrix(const Catalog& catalog,
                                          const std::set<std::string>& apps,
                                          const std::string& condition,
                                          const std::set<std::string>& focus,
                                          const Aggregator& agg, Metric metric) {
    std::map<AppPair, double> out;
    for (auto i = apps.begin(); i != apps.end(); ++i) {
        out[{*i, *i}] = 0.0;
        for (auto j = std::next(i); j != apps.end(); ++j) {
            const auto vec = distance_vector(catalog, *i, *j, condition, focus);
            out[make_pair_key(*i, *j)] = severity(vec, focus, agg, metric);
        }
    }
    return out;
}

namespace {

nlohmann::json sets_to_json(const std::map<std::string, std::set<std::string>>& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, apps] : m) j[k] = apps;
    return j;
}

nlohmann::json matrix_to_json(const std::map<AppPair, double>& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [pair, v] : m) j[pair.first + "," + pair.second] = v;
    return j;
}

// variables of the given kind profiled by every app under the condition
std::set<std::string> common_variables(const Catalog& catalog,
                                       const std::set<std::string>& apps,
                                       const std::string& condition, VarKind kind) {
    std::set<std::string> out;
    bool first = true;
    for (const auto& a : apps) {
        std::set<std::string> here;
        for (const auto& [var, _] : catalog.profile_of(a, condition).distributions)
            if (catalog.variable(var).kind == kind) here.insert(var);
        if (first) {
            out = std::move(here);
            first = false;
        } else {
            std::set<std::string> inter;
            std::set_intersection(out.begin(), out.end(), here.begin(), here.end(),
                                  std::inserter(inter, inter.begin()));
            out = std::move(inter);
        }
    }
    return out;
}

}  // namespace

nlohmann::json generate_report(const Catalog& catalog, const ConflictGraph& graph,
                               const std::set<std::string>& apps,
                               const std::string& condition, const KpmFocus& focus,
                               const Aggregator& agg, Metric metric) {
    const AugmentedGraph aug = build_augmented(catalog, graph, apps);
    const DetectionResult det = detect_all(aug);

    std::set<std::string> pstar = focus.params_of_interest;
    if (pstar.empty())
        pstar = common_variables(catalog, apps, condition, VarKind::Parameter);
    std::set<std::string> kstar = focus.kpms_of_interest;
    if (kstar.empty()) kstar = common_variables(catalog, apps, condition, VarKind::Kpm);

    nlohmann::json report;
    auto& ex = report["existence"];
    ex["direct"] = sets_to_json(det.direct);
    ex["parameter"] = sets_to_json(det.parameter);
    ex["kpm"] = sets_to_json(det.kpm);
    // influencing-app sets are an interpretation aid, not a detection set
    ex["parameter_influencers_aux"] = sets_to_json(det.parameter_influencers);

    auto& sev = report["severity"];
    sev["parameters"] = matrix_to_json(
        pstar.empty() ? std::map<AppPair, double>{}
                      : severity_matrix(catalog, apps, condition, pstar, agg, metric));
    sev["kpms"] = matrix_to_json(
        kstar.empty() ? std::map<AppPair, double>{}
                      : severity_matrix(catalog, apps, condition, kstar, agg, metric));

    report["graphs"]["augmented"] = aug.to_json();

    bool mixed = false;
    for (const auto& var : kstar)
        if (catalog.variable(var).value_type == ValueType::Categorical) mixed = true;
    auto& meta = report["metadata"];
    meta["condition"] = condition;
    meta["apps"] = apps;
    meta["metric"] = metric_name(metric);
    meta["aggregator"] = aggregator_name(agg);
    meta["focus"]["parameters"] = pstar;
    meta["focus"]["kpms"] = kstar;
    meta["mixed_categorical_numeric_focus"] = mixed;
    return report;
}

void write_ecdf_csv(const Catalog& catalog, std::ostream& out) {
    out << std::setprecision(12);
    out << "app,condition,variable,x,F\n";
    for (const auto& [id, a] : catalog.applications())
        for (const auto& [cond, sp] : a.profiles)
            for (const auto& [var, dist] : sp.distributions)
                if (const auto* e = std::get_if<Ecdf>(&dist))
                    for (const auto& [x, f] : e->points)
                        out << id << ',' << cond << ',' << var << ',' << x << ',' << f
                            << '\n';
}

std::string aggregator_name(const Aggregator& agg) {
    switch (agg.kind) {
        case AggKind::WeightedMean:
            return agg.weights.empty() ? "mean" : "weighted-mean";
        case AggKind::Median:
            return "median";
        case AggKind::Max:
            return "max";
    }
    return "?";
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::Ks:
            return "ks";
        case Metric::Int:
            return "int";
        case Metric::Chi:
            return "chi";
    }
    return "?";
}

}  // namespace ranconf
