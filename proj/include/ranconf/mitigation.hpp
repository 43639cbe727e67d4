#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ranconf/evaluation.hpp"

namespace ranconf {

struct TolerancePolicy {
    double global = 1.0;  // maximum admissible severity
    // per-KPM distance thresholds; 1.0 means "not monitored". When present,
    // these take precedence over the global threshold.
    std::map<std::string, double> per_kpm;

    void validate() const;
};

struct DeploymentPlan {
    struct Rejection {
        std::string app;
        std::string blocking_app;
        double blocking_severity;
    };
    struct TraceEntry {
        std::string app;
        std::string against;
        double severity;
        bool admissible;
    };
    std::vector<std::string> deployed;  // admission order
    std::vector<Rejection> rejected;
    std::vector<TraceEntry> trace;

    nlohmann::json to_json() const;
};

// Pair admissible iff severity <= the global threshold; in the per-KPM form
// every focused KPM's distance must stay within its own threshold.
std::map<AppPair, bool> coexistence_matrix(const std::map<AppPair, double>& severities,
                                           const TolerancePolicy& policy);
std::map<AppPair, bool> coexistence_matrix(
    const std::map<AppPair, std::map<std::string, double>>& per_kpm_distances,
    const TolerancePolicy& policy);

// Greedy admission: seed with predeployed apps plus apps with zero severity
// against every other candidate and deployed app, then repeatedly admit the
// highest-priority remaining app whose max severity against the deployed set
// is within tolerance. Ties broken by lexicographic application id;
// predeployed apps are never evicted.
DeploymentPlan greedy_deploy(
    const std::set<std::string>& apps, const std::map<std::string, double>& priorities,
    const std::map<AppPair, double>& severities, const TolerancePolicy& policy,
    const std::set<std::string>& predeployed = {},
    const std::map<AppPair, std::map<std::string, double>>* per_kpm_distances = nullptr);

}  // namespace ranconf
