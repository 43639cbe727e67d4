#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include <json.hpp>

#include "ranconf/catalog.hpp"
#include "ranconf/graph.hpp"

namespace ranconf {

// Unordered application pair, stored canonically (first <= second).
using AppPair = std::pair<std::string, std::string>;
AppPair make_pair_key(const std::string& a, const std::string& b);

// Per-variable distances between two profiles. Numeric variables carry both
// KS and INT; categorical variables carry chi.
struct VarDistance {
    std::optional<double> ks;
    std::optional<double> integral;
    std::optional<double> chi;

    // value under the metric used for severity: INT for numeric, chi for
    // categorical (both live in [0,1]); Metric::Ks selects KS for numeric.
    double select(Metric metric) const;
};

struct DistanceVector {
    AppPair pair;
    std::string condition;
    std::map<std::string, VarDistance> entries;
};

enum class AggKind { WeightedMean, Median, Max };

struct Aggregator {
    AggKind kind = AggKind::WeightedMean;
    std::map<std::string, double> weights;  // WeightedMean only; empty = uniform
};

enum class Scope { Parameters, Kpms };

struct SeverityIndex {
    AppPair pair;
    std::string condition;
    Scope scope;
    double value;
};

struct KpmFocus {
    std::set<std::string> params_of_interest;
    std::set<std::string> kpms_of_interest;
};

DistanceVector distance_vector(const Catalog& catalog, const std::string& a1,
                               const std::string& a2, const std::string& condition,
                               const std::set<std::string>& variables);

double severity(const DistanceVector& vec, const std::set<std::string>& focus,
                const Aggregator& agg, Metric metric = Metric::Int);

std::map<AppPair, double> severity_matrix(const Catalog& catalog,
                                          const std::set<std::string>& apps,
                                          const std::string& condition,
                                          const std::set<std::string>& focus,
                                          const Aggregator& agg,
                                          Metric metric = Metric::Int);

// Full report: detection sets, per-pair severities for both scopes, and the
// serialized augmented graph. Byte-identical output for identical inputs.
nlohmann::json generate_report(const Catalog& catalog, const ConflictGraph& graph,
                               const std::set<std::string>& apps,
                               const std::string& condition, const KpmFocus& focus,
                               const Aggregator& agg, Metric metric = Metric::Int);

// Per-variable ECDF step curves for external plotting.
// Columns: app,condition,variable,x,F
void write_ecdf_csv(const Catalog& catalog, std::ostream& out);

std::string aggregator_name(const Aggregator& agg);
std::string metric_name(Metric m);

}  // namespace ranconf
