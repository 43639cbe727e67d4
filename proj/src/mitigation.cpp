#include "ranconf/mitigation.hpp"

#include <algorithm>
#include <cmath>

namespace ranconf {

void TolerancePolicy::validate() const {
    if (global < 0.0 || global > 1.0)
        throw InputError("tolerance: global threshold must lie in [0,1]");
    for (const auto& [k, v] : per_kpm)
        if (v < 0.0 || v > 1.0)
            throw InputError("tolerance: threshold for '" + k + "' must lie in [0,1]");
}

namespace {

double lookup(const std::map<AppPair, double>& m, const std::string& a,
              const std::string& b) {
    if (a == b) return 0.0;
    auto it = m.find(make_pair_key(a, b));
    if (it == m.end())
        throw InputError("mitigation: severity matrix is missing pair (" + a + "," +
                         b + ")");
    return it->second;
}

bool pair_admissible(
    const std::string& a, const std::string& b, const TolerancePolicy& policy,
    const std::map<AppPair, double>& severities,
    const std::map<AppPair, std::map<std::string, double>>* per_kpm_distances) {
    if (!policy.per_kpm.empty() && per_kpm_distances) {
        auto it = per_kpm_distances->find(make_pair_key(a, b));
        if (it == per_kpm_distances->end())
            throw InputError("mitigation: per-KPM distances missing pair (" + a + "," +
                             b + ")");
        for (const auto& [kpm, threshold] : policy.per_kpm) {
            auto dit = it->second.find(kpm);
            if (dit == it->second.end())
                throw InputError("mitigation: no distance for monitored KPM '" + kpm +
                                 "'");
            if (dit->second > threshold) return false;
        }
        return true;
    }
    return lookup(severities, a, b) <= policy.global;
}

}  // namespace

std::map<AppPair, bool> coexistence_matrix(const std::map<AppPair, double>& severities,
                                           const TolerancePolicy& policy) {
    policy.validate();
    std::map<AppPair, bool> out;
    for (const auto& [pair, sev] : severities) out[pair] = sev <= policy.global;
    return out;
}

std::map<AppPair, bool> coexistence_matrix(
    const std::map<AppPair, std::map<std::string, double>>& per_kpm_distances,
    const TolerancePolicy& policy) {
    policy.validate();
    std::map<AppPair, bool> out;
    for (const auto& [pair, dists] : per_kpm_distances) {
        bool ok = true;
        for (const auto& [kpm, threshold] : policy.per_kpm) {
            auto it = dists.find(kpm);
            if (it == dists.end())
                throw InputError("mitigation: no distance for monitored KPM '" + kpm +
                                 "'");
            if (it->second > threshold) ok = false;
        }
        out[pair] = ok;
    }
    return out;
}

DeploymentPlan greedy_deploy(
    const std::set<std::string>& apps, const std::map<std::string, double>& priorities,
    const std::map<AppPair, double>& severities, const TolerancePolicy& policy,
    const std::set<std::string>& predeployed,
    const std::map<AppPair, std::map<std::string, double>>* per_kpm_distances) {
    policy.validate();
    // symmetry sanity: both orderings of a stored pair must agree (pairs are
    // canonical, so verify the matrix covers every needed pair instead)
    std::set<std::string> all = apps;
    all.insert(predeployed.begin(), predeployed.end());
    for (auto i = all.begin(); i != all.end(); ++i)
        for (auto j = std::next(i); j != all.end(); ++j) lookup(severities, *i, *j);

    DeploymentPlan plan;
    std::set<std::string> deployed_set = predeployed;
    for (const auto& a : predeployed) plan.deployed.push_back(a);

    // Step 1: also seed apps that are conflict-free, i.e. zero severity
    // against every other candidate and already-deployed app
    std::set<std::string> remaining;
    for (const auto& a : apps)
        if (!deployed_set.count(a)) remaining.insert(a);
    for (const auto& a : remaining) {
        bool clean = true;
        for (const auto& b : all)
            if (b != a && lookup(severities, a, b) > 0.0) clean = false;
        if (clean) {
            deployed_set.insert(a);
            plan.deployed.push_back(a);
            plan.trace.push_back({a, "", 0.0, true});
        }
    }
    for (const auto& a : deployed_set) remaining.erase(a);

    // Steps 2-3: admit by descending priority, ties by id
    auto priority_of = [&](const std::string& a) {
        auto it = priorities.find(a);
        return it == priorities.end() ? 0.0 : it->second;
    };
    while (!remaining.empty()) {
        auto best = remaining.begin();
        for (auto it = std::next(remaining.begin()); it != remaining.end(); ++it)
            if (priority_of(*it) > priority_of(*best)) best = it;
        const std::string a = *best;
        remaining.erase(best);

        std::string worst_app;
        double worst_sev = -1.0;
        bool ok = true;
        for (const auto& b : deployed_set) {
            const double sev = lookup(severities, a, b);
            const bool adm = pair_admissible(a, b, policy, severities, per_kpm_distances);
            plan.trace.push_back({a, b, sev, adm});
            if (!adm && sev > worst_sev) {
                worst_sev = sev;
                worst_app = b;
            }
            if (!adm) ok = false;
        }
        if (ok) {
            deployed_set.insert(a);
            plan.deployed.push_back(a);
        } else {
            plan.rejected.push_back({a, worst_app, worst_sev});
        }
    }
    return plan;
}

nlohmann::json DeploymentPlan::to_json() const {
    nlohmann::json j;
    j["deployed"] = deployed;
    auto& rej = j["rejected"] = nlohmann::json::array();
    for (const auto& r : rejected)
        rej.push_back({{"app", r.app},
                       {"blocking_app", r.blocking_app},
                       {"blocking_severity", r.blocking_severity}});
    auto& tr = j["trace"] = nlohmann::json::array();
    for (const auto& t : trace)
        tr.push_back({{"app", t.app},
                      {"against", t.against},
                      {"severity", t.severity},
                      {"admissible", t.admissible}});
    return j;
}

}  // namespace ranconf
