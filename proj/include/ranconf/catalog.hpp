#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>

#include <json.hpp>

#include "ranconf/statdist.hpp"

namespace ranconf {

enum class VarKind { Parameter, Kpm };
enum class ValueType { Numeric, Categorical };

struct Variable {
    std::string name;
    VarKind kind = VarKind::Parameter;
    ValueType value_type = ValueType::Numeric;
    std::string unit;  // informational, may be empty
    // optional operator-pinned comparison range for the INT distance
    std::optional<std::pair<double, double>> range;
};

struct OperationalCondition {
    std::string id;
    std::map<std::string, std::string> descriptors;  // recorded, never computed on
};

using Distribution = std::variant<Ecdf, CategoricalDist>;

struct StatisticalProfile {
    std::string condition;
    std::map<std::string, Distribution> distributions;  // keyed by variable name
    std::map<std::string, std::uint64_t> sample_count;
};

struct ApplicationProfile {
    std::string app;
    std::set<std::string> parameter_set;              // names of controlled parameters
    std::map<std::string, StatisticalProfile> profiles;  // keyed by condition id
    double priority = 0.0;
};

// Immutable after load; safe for concurrent readers.
class Catalog {
  public:
    static Catalog from_json(const nlohmann::json& doc);
    static Catalog load_file(const std::string& path);
    nlohmann::json to_json() const;

    const std::map<std::string, Variable>& variables() const { return variables_; }
    const std::map<std::string, OperationalCondition>& conditions() const {
        return conditions_;
    }
    const std::map<std::string, ApplicationProfile>& applications() const {
        return apps_;
    }

    bool has_app(const std::string& id) const { return apps_.count(id) != 0; }
    const ApplicationProfile& app(const std::string& id) const;
    const Variable& variable(const std::string& name) const;

    std::set<std::string> controlled_parameters(const std::string& app) const;
    const StatisticalProfile& profile_of(const std::string& app,
                                         const std::string& condition) const;

    // Builder path used by the profiler: inserts or replaces entries, then
    // re-validates. Returns a new catalog value (the original is untouched).
    Catalog with_profile(const std::string& app,
                         const std::set<std::string>& parameter_set,
                         double priority, const StatisticalProfile& profile) const;
    Catalog with_variable(const Variable& v) const;
    Catalog with_condition(const OperationalCondition& c) const;

  private:
    void validate() const;

    std::map<std::string, Variable> variables_;
    std::map<std::string, OperationalCondition> conditions_;
    std::map<std::string, ApplicationProfile> apps_;
};

}  // namespace ranconf
