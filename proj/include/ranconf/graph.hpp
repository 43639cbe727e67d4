#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ranconf/catalog.hpp"

namespace ranconf {

// Dependency layer: directed parameter->parameter influence edges (pi) and
// parameter->KPM influence edges (epsilon).
struct ConflictGraph {
    std::set<std::string> params;
    std::set<std::string> kpms;
    std::set<std::pair<std::string, std::string>> param_edges;  // (p1, p2): p1 influences p2
    std::set<std::pair<std::string, std::string>> kpm_edges;    // (p, k): p influences k

    static ConflictGraph from_json(const nlohmann::json& doc, const Catalog& catalog);
    static ConflictGraph load_file(const std::string& path, const Catalog& catalog);
    nlohmann::json to_json() const;
    void validate() const;
};

// Application layer on top of the dependency layer: alpha control edges.
struct AugmentedGraph {
    std::set<std::string> apps;
    std::set<std::pair<std::string, std::string>> control_edges;  // (a, p)
    ConflictGraph base;

    std::set<std::string> controllers_of(const std::string& param) const;
    nlohmann::json to_json() const;
};

struct DetectionResult {
    // conflicted parameter / KPM -> involved applications
    std::map<std::string, std::set<std::string>> direct;
    std::map<std::string, std::set<std::string>> parameter;
    std::map<std::string, std::set<std::string>> kpm;
    // apps controlling a parameter that influences a conflicted parameter;
    // auxiliary data, not part of the detection sets proper
    std::map<std::string, std::set<std::string>> parameter_influencers;

    bool any() const { return !direct.empty() || !parameter.empty() || !kpm.empty(); }
};

AugmentedGraph build_augmented(const Catalog& catalog, const ConflictGraph& graph,
                               const std::set<std::string>& apps);

// Parameters controlled by more than one application.
std::map<std::string, std::set<std::string>> detect_direct(const AugmentedGraph& aug);

// Parameters whose incoming influence count exceeds 1, counting an implicit
// identity edge p->p for every controlled p; reported apps are the
// controllers of the conflicted parameter. The second map lists influencer
// apps (controllers of influencing parameters).
std::pair<std::map<std::string, std::set<std::string>>,
          std::map<std::string, std::set<std::string>>>
detect_parameter(const AugmentedGraph& aug);

// KPMs influenced by at least two distinct controlled parameters; reported
// apps are all apps controlling any influencing parameter.
std::map<std::string, std::set<std::string>> detect_kpm(const AugmentedGraph& aug);

DetectionResult detect_all(const AugmentedGraph& aug);

}  // namespace ranconf
