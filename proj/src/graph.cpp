#include "ranconf/graph.hpp"

#include <fstream>

namespace ranconf {

ConflictGraph ConflictGraph::from_json(const nlohmann::json& doc,
                                       const Catalog& catalog) {
    ConflictGraph g;
    for (const auto& [name, v] : catalog.variables()) {
        if (v.kind == VarKind::Parameter)
            g.params.insert(name);
        else
            g.kpms.insert(name);
    }
    for (const auto& e : doc.value("param_edges", nlohmann::json::array())) {
        if (!e.is_array() || e.size() != 2)
            throw InputError("graph: malformed param_edges entry");
        g.param_edges.emplace(e[0].get<std::string>(), e[1].get<std::string>());
    }
    for (const auto& e : doc.value("kpm_edges", nlohmann::json::array())) {
        if (!e.is_array() || e.size() != 2)
            throw InputError("graph: malformed kpm_edges entry");
        g.kpm_edges.emplace(e[0].get<std::string>(), e[1].get<std::string>());
    }
    g.validate();
    return g;
}

ConflictGraph ConflictGraph::load_file(const std::string& path, const Catalog& catalog) {
    std::ifstream in(path);
    if (!in) throw InputError("graph: cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("graph: invalid JSON in '" + path + "': " + e.what());
    }
    return from_json(doc, catalog);
}

void ConflictGraph::validate() const {
    for (const auto& [p1, p2] : param_edges) {
        if (!params.count(p1))
            throw InputError("graph: param edge source '" + p1 + "' is not a parameter");
        if (!params.count(p2))
            throw InputError("graph: param edge target '" + p2 + "' is not a parameter");
    }
    for (const auto& [p, k] : kpm_edges) {
        if (!params.count(p))
            throw InputError("graph: kpm edge source '" + p + "' is not a parameter");
        if (!kpms.count(k))
            throw InputError("graph: kpm edge target '" + k + "' is not a kpm");
    }
}

nlohmann::json ConflictGraph::to_json() const {
    nlohmann::json doc;
    auto& pe = doc["param_edges"] = nlohmann::json::array();
    for (const auto& [a, b] : param_edges) pe.push_back({a, b});
    auto& ke = doc["kpm_edges"] = nlohmann::json::array();
    for (const auto& [a, b] : kpm_edges) ke.push_back({a, b});
    return doc;
}

std::set<std::string> AugmentedGraph::controllers_of(const std::string& param) const {
    std::set<std::string> out;
    for (const auto& [a, p] : control_edges)
        if (p == param) out.insert(a);
    return out;
}

nlohmann::json AugmentedGraph::to_json() const {
    nlohmann::json doc;
    doc["apps"] = apps;
    auto& ce = doc["control_edges"] = nlohmann::json::array();
    for (const auto& [a, p] : control_edges) ce.push_back({a, p});
    doc["base"] = base.to_json();
    return doc;
}

AugmentedGraph build_augmented(const Catalog& catalog, const ConflictGraph& graph,
                               const std::set<std::string>& apps) {
    AugmentedGraph aug;
    aug.base = graph;
    aug.apps = apps;
    for (const auto& a : apps) {
        for (const auto& p : catalog.controlled_parameters(a)) {
            if (!graph.params.count(p))
                throw InputError("graph: application '" + a + "' controls '" + p +
                                 "' which is absent from the graph");
            aug.control_edges.emplace(a, p);
        }
    }
    return aug;
}

std::map<std::string, std::set<std::string>> detect_direct(const AugmentedGraph& aug) {
    std::map<std::string, std::set<std::string>> controllers;
    for (const auto& [a, p] : aug.control_edges) controllers[p].insert(a);
    std::map<std::string, std::set<std::string>> out;
    for (auto& [p, apps] : controllers)
        if (apps.size() > 1) out[p] = apps;
    return out;
}

std::pair<std::map<std::string, std::set<std::string>>,
          std::map<std::string, std::set<std::string>>>
detect_parameter(const AugmentedGraph& aug) {
    std::set<std::string> controlled;
    for (const auto& [_, p] : aug.control_edges) controlled.insert(p);

    std::map<std::string, std::set<std::string>> conflicted;
    std::map<std::string, std::set<std::string>> influencers;
    for (const auto& p : aug.base.params) {
        // incoming influences from controlled parameters; a controlled p
        // counts its own identity edge p -> p
        std::set<std::string> sources;
        if (controlled.count(p)) sources.insert(p);
        for (const auto& [p1, p2] : aug.base.param_edges)
            if (p2 == p && controlled.count(p1)) sources.insert(p1);
        if (sources.size() <= 1) continue;
        conflicted[p] = aug.controllers_of(p);
        std::set<std::string>& infl = influencers[p];
        for (const auto& src : sources)
            if (src != p)
                for (const auto& a : aug.controllers_of(src)) infl.insert(a);
    }
    return {conflicted, influencers};
}

std::map<std::string, std::set<std::string>> detect_kpm(const AugmentedGraph& aug) {
    std::set<std::string> controlled;
    for (const auto& [_, p] : aug.control_edges) controlled.insert(p);

    std::map<std::string, std::set<std::string>> out;
    for (const auto& k : aug.base.kpms) {
        std::set<std::string> sources;
        for (const auto& [p, kk] : aug.base.kpm_edges)
            if (kk == k && controlled.count(p)) sources.insert(p);
        if (sources.size() < 2) continue;
        std::set<std::string>& apps = out[k];
        for (const auto& p : sources)
            for (const auto& a : aug.controllers_of(p)) apps.insert(a);
    }
    return out;
}

DetectionResult detect_all(const AugmentedGraph& aug) {
    DetectionResult r;
    r.direct = detect_direct(aug);
    auto [pc, infl] = detect_parameter(aug);
    r.parameter = std::move(pc);
    r.parameter_influencers = std::move(infl);
    r.kpm = detect_kpm(aug);
    return r;
}

}  // namespace ranconf
