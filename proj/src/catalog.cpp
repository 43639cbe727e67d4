#include "ranconf/catalog.hpp"

#include <fstream>

namespace ranconf {

namespace {

VarKind parse_kind(const std::string& s, const std::string& where) {
    if (s == "parameter") return VarKind::Parameter;
    if (s == "kpm") return VarKind::Kpm;
    throw InputError("catalog: unknown variable kind '" + s + "' in " + where);
}

ValueType parse_value_type(const std::string& s, const std::string& where) {
    if (s == "numeric") return ValueType::Numeric;
    if (s == "categorical") return ValueType::Categorical;
    throw InputError("catalog: unknown value_type '" + s + "' in " + where);
}

const nlohmann::json& require(const nlohmann::json& j, const char* key,
                              const std::string& where) {
    auto it = j.find(key);
    if (it == j.end())
        throw InputError("catalog: missing field '" + std::string(key) + "' in " + where);
    return *it;
}

Distribution parse_distribution(const nlohmann::json& j, const std::string& where) {
    const std::string type = require(j, "type", where).get<std::string>();
    if (type == "ecdf") {
        Ecdf e;
        for (const auto& pt : require(j, "points", where)) {
            if (!pt.is_array() || pt.size() != 2)
                throw InputError("catalog: malformed ecdf point in " + where);
            e.points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
        }
        e.n = j.value("n", std::uint64_t{0});
        if (e.n == 0)
            throw InputError("catalog: ecdf sample count 'n' must be > 0 in " + where);
        try {
            e.validate();
        } catch (const InputError& err) {
            throw InputError(std::string(err.what()) + " in " + where);
        }
        return e;
    }
    if (type == "categorical") {
        CategoricalDist c;
        for (const auto& [label, count] : require(j, "counts", where).items())
            c.counts[label] = count.get<std::uint64_t>();
        try {
            c.validate();
        } catch (const InputError& err) {
            throw InputError(std::string(err.what()) + " in " + where);
        }
        return c;
    }
    throw InputError("catalog: unknown distribution type '" + type + "' in " + where);
}

nlohmann::json distribution_to_json(const Distribution& d) {
    nlohmann::json j;
    if (const auto* e = std::get_if<Ecdf>(&d)) {
        j["type"] = "ecdf";
        j["n"] = e->n;
        auto& pts = j["points"] = nlohmann::json::array();
        for (const auto& [x, f] : e->points) pts.push_back({x, f});
    } else {
        const auto& c = std::get<CategoricalDist>(d);
        j["type"] = "categorical";
        j["counts"] = c.counts;
    }
    return j;
}

}  // namespace

Catalog Catalog::from_json(const nlohmann::json& doc) {
    Catalog cat;
    for (const auto& jv : doc.value("variables", nlohmann::json::array())) {
        Variable v;
        v.name = require(jv, "name", "variables").get<std::string>();
        const std::string where = "variable '" + v.name + "'";
        v.kind = parse_kind(require(jv, "kind", where).get<std::string>(), where);
        v.value_type =
            parse_value_type(require(jv, "value_type", where).get<std::string>(), where);
        v.unit = jv.value("unit", std::string{});
        if (jv.contains("range")) {
            const auto& r = jv["range"];
            if (!r.is_array() || r.size() != 2 ||
                !(r[0].get<double>() < r[1].get<double>()))
                throw InputError("catalog: malformed range in " + where);
            v.range = std::make_pair(r[0].get<double>(), r[1].get<double>());
        }
        if (!cat.variables_.emplace(v.name, v).second)
            throw InputError("catalog: duplicate " + where);
    }
    for (const auto& jc : doc.value("conditions", nlohmann::json::array())) {
        OperationalCondition c;
        c.id = require(jc, "id", "conditions").get<std::string>();
        const auto descriptors = jc.value("descriptors", nlohmann::json::object());
        for (const auto& [k, val] : descriptors.items())
            c.descriptors[k] = val.get<std::string>();
        if (!cat.conditions_.emplace(c.id, c).second)
            throw InputError("catalog: duplicate condition '" + c.id + "'");
    }
    for (const auto& ja : doc.value("applications", nlohmann::json::array())) {
        ApplicationProfile a;
        a.app = require(ja, "id", "applications").get<std::string>();
        const std::string where = "application '" + a.app + "'";
        if (a.app.empty()) throw InputError("catalog: empty application id");
        for (const auto& p : require(ja, "parameters", where))
            a.parameter_set.insert(p.get<std::string>());
        a.priority = ja.value("priority", 0.0);
        if (a.priority < 0.0)
            throw InputError("catalog: negative priority in " + where);
        const auto profiles = ja.value("profiles", nlohmann::json::object());
        for (const auto& [cond, jp] : profiles.items()) {
            StatisticalProfile sp;
            sp.condition = cond;
            const auto& dists = require(jp, "distributions",
                                        where + " profile '" + cond + "'");
            for (const auto& [var, jd] : dists.items()) {
                const std::string dwhere =
                    where + " profile '" + cond + "' variable '" + var + "'";
                sp.distributions[var] = parse_distribution(jd, dwhere);
                if (const auto* e = std::get_if<Ecdf>(&sp.distributions[var]))
                    sp.sample_count[var] = e->n;
                else
                    sp.sample_count[var] =
                        std::get<CategoricalDist>(sp.distributions[var]).total();
            }
            a.profiles[cond] = std::move(sp);
        }
        if (!cat.apps_.emplace(a.app, a).second)
            throw InputError("catalog: duplicate application id '" + a.app + "'");
    }
    cat.validate();
    return cat;
}

Catalog Catalog::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("catalog: cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("catalog: invalid JSON in '" + path + "': " + e.what());
    }
    return from_json(doc);
}

void Catalog::validate() const {
    for (const auto& [id, a] : apps_) {
        const std::string where = "application '" + id + "'";
        if (a.parameter_set.empty())
            throw InputError("catalog: empty parameter set in " + where);
        for (const auto& p : a.parameter_set) {
            auto it = variables_.find(p);
            if (it == variables_.end())
                throw InputError("catalog: parameter '" + p +
                                 "' of " + where + " not in variable registry");
            if (it->second.kind != VarKind::Parameter)
                throw InputError("catalog: '" + p + "' in " + where +
                                 " is not a parameter-kind variable");
        }
        for (const auto& [cond, sp] : a.profiles) {
            if (!conditions_.count(cond))
                throw InputError("catalog: unknown condition '" + cond + "' in " + where);
            std::set<std::string> profiled_params;
            for (const auto& [var, dist] : sp.distributions) {
                auto it = variables_.find(var);
                if (it == variables_.end())
                    throw InputError("catalog: variable '" + var + "' in " + where +
                                     " profile '" + cond + "' not in registry");
                const bool is_ecdf = std::holds_alternative<Ecdf>(dist);
                if (is_ecdf != (it->second.value_type == ValueType::Numeric))
                    throw InputError("catalog: distribution type mismatch for '" + var +
                                     "' in " + where);
                if (it->second.kind == VarKind::Parameter) {
                    if (!a.parameter_set.count(var))
                        throw InputError("catalog: profiled parameter '" + var +
                                         "' not in the parameter set of " + where);
                    profiled_params.insert(var);
                }
                if (sp.sample_count.at(var) == 0)
                    throw InputError("catalog: zero sample count for '" + var +
                                     "' in " + where);
            }
            if (profiled_params != a.parameter_set)
                throw InputError("catalog: " + where + " profile '" + cond +
                                 "' does not cover the declared parameter set");
        }
    }
}

nlohmann::json Catalog::to_json() const {
    nlohmann::json doc;
    auto& vars = doc["variables"] = nlohmann::json::array();
    for (const auto& [_, v] : variables_) {
        nlohmann::json jv;
        jv["name"] = v.name;
        jv["kind"] = v.kind == VarKind::Parameter ? "parameter" : "kpm";
        jv["value_type"] = v.value_type == ValueType::Numeric ? "numeric" : "categorical";
        if (!v.unit.empty()) jv["unit"] = v.unit;
        if (v.range) jv["range"] = {v.range->first, v.range->second};
        vars.push_back(jv);
    }
    auto& conds = doc["conditions"] = nlohmann::json::array();
    for (const auto& [_, c] : conditions_) {
        nlohmann::json jc;
        jc["id"] = c.id;
        jc["descriptors"] = c.descriptors;
        conds.push_back(jc);
    }
    auto& apps = doc["applications"] = nlohmann::json::array();
    for (const auto& [_, a] : apps_) {
        nlohmann::json ja;
        ja["id"] = a.app;
        ja["parameters"] = a.parameter_set;
        ja["priority"] = a.priority;
        auto& profs = ja["profiles"] = nlohmann::json::object();
        for (const auto& [cond, sp] : a.profiles) {
            auto& dists = profs[cond]["distributions"] = nlohmann::json::object();
            for (const auto& [var, dist] : sp.distributions)
                dists[var] = distribution_to_json(dist);
        }
        apps.push_back(ja);
    }
    return doc;
}

const ApplicationProfile& Catalog::app(const std::string& id) const {
    auto it = apps_.find(id);
    if (it == apps_.end()) throw InputError("catalog: unknown application '" + id + "'");
    return it->second;
}

const Variable& Catalog::variable(const std::string& name) const {
    auto it = variables_.find(name);
    if (it == variables_.end())
        throw InputError("catalog: unknown variable '" + name + "'");
    return it->second;
}

std::set<std::string> Catalog::controlled_parameters(const std::string& app_id) const {
    return app(app_id).parameter_set;
}

const StatisticalProfile& Catalog::profile_of(const std::string& app_id,
                                              const std::string& condition) const {
    const auto& a = app(app_id);
    auto it = a.profiles.find(condition);
    if (it == a.profiles.end())
        throw InputError("catalog: application '" + app_id + "' has no profile for "
                         "condition '" + condition + "' (profile it in the sandbox first)");
    return it->second;
}

Catalog Catalog::with_profile(const std::string& app_id,
                              const std::set<std::string>& parameter_set,
                              double priority,
                              const StatisticalProfile& profile) const {
    Catalog next = *this;
    auto& a = next.apps_[app_id];
    a.app = app_id;
    a.parameter_set = parameter_set;
    a.priority = priority;
    a.profiles[profile.condition] = profile;
    next.validate();
    return next;
}

Catalog Catalog::with_variable(const Variable& v) const {
    Catalog next = *this;
    next.variables_[v.name] = v;
    next.validate();
    return next;
}

Catalog Catalog::with_condition(const OperationalCondition& c) const {
    Catalog next = *this;
    next.conditions_[c.id] = c;
    next.validate();
    return next;
}

}  // namespace ranconf
