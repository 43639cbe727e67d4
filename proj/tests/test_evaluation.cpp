#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ranconf/evaluation.hpp"

using namespace ranconf;
using nlohmann::json;

namespace {

// two apps controlling one PRB parameter, with one numeric and one
// categorical KPM each
Catalog two_app_catalog() {
    json doc = json::parse(R"({
      "variables": [
        {"name": "prbs", "kind": "parameter", "value_type": "numeric"},
        {"name": "throughput", "kind": "kpm", "value_type": "numeric"},
        {"name": "buffer", "kind": "kpm", "value_type": "numeric"},
        {"name": "scheduler", "kind": "kpm", "value_type": "categorical"}
      ],
      "conditions": [{"id": "c0"}],
      "applications": []
    })");
    auto app = [&](const std::string& id, double prio, json dists) {
        json profiles = json::object();
        profiles["c0"]["distributions"] = std::move(dists);
        doc["applications"].push_back({{"id", id},
                                       {"parameters", {"prbs"}},
                                       {"priority", prio},
                                       {"profiles", profiles}});
    };
    app("a1", 50,
        {{"prbs", {{"type", "ecdf"}, {"n", 3}, {"points", {{1, 1.0 / 3}, {2, 2.0 / 3}, {3, 1.0}}}}},
         {"throughput", {{"type", "ecdf"}, {"n", 2}, {"points", {{10, 0.5}, {20, 1.0}}}}},
         {"buffer", {{"type", "ecdf"}, {"n", 2}, {"points", {{0, 0.5}, {100, 1.0}}}}},
         {"scheduler", {{"type", "categorical"}, {"counts", {{"WF", 60}, {"RR", 40}, {"PR", 0}}}}}});
    app("a2", 40,
        {{"prbs", {{"type", "ecdf"}, {"n", 3}, {"points", {{2, 1.0 / 3}, {3, 2.0 / 3}, {4, 1.0}}}}},
         {"throughput", {{"type", "ecdf"}, {"n", 2}, {"points", {{10, 0.5}, {20, 1.0}}}}},
         {"buffer", {{"type", "ecdf"}, {"n", 2}, {"points", {{50, 0.5}, {100, 1.0}}}}},
         {"scheduler", {{"type", "categorical"}, {"counts", {{"WF", 50}, {"RR", 40}, {"PR", 10}}}}}});
    return Catalog::from_json(doc);
}

ConflictGraph trivial_graph(const Catalog& cat) {
    json doc;
    doc["param_edges"] = json::array();
    doc["kpm_edges"] = json::array({{"prbs", "throughput"}, {"prbs", "buffer"}});
    return ConflictGraph::from_json(doc, cat);
}

}  // namespace

TEST_CASE("distance vector carries ks+int for numeric and chi for categorical") {
    const auto cat = two_app_catalog();
    const auto vec =
        distance_vector(cat, "a1", "a2", "c0", {"prbs", "throughput", "scheduler"});
    CHECK(vec.pair == AppPair{"a1", "a2"});
    const auto& prbs = vec.entries.at("prbs");
    CHECK(prbs.ks.value() == doctest::Approx(1.0 / 3.0));
    CHECK(prbs.integral.value() == doctest::Approx(std::sqrt(1.0 / 3.0)));
    CHECK_FALSE(prbs.chi.has_value());
    CHECK(vec.entries.at("throughput").integral.value() == 0.0);
    const auto& sched = vec.entries.at("scheduler");
    CHECK(sched.chi.value() == doctest::Approx(0.995723179650791).epsilon(1e-8));
    CHECK_FALSE(sched.ks.has_value());
    // chi answers regardless of the requested numeric metric
    CHECK(sched.select(Metric::Ks) == sched.select(Metric::Int));
}

TEST_CASE("distance vector rejects unknown variables and missing profiles") {
    const auto cat = two_app_catalog();
    CHECK_THROWS_AS(distance_vector(cat, "a1", "a2", "c0", {"ghost"}), InputError);
    CHECK_THROWS_AS(distance_vector(cat, "a1", "a2", "cX", {"prbs"}), InputError);
}

TEST_CASE("severity aggregation: weighted mean, lower median, max") {
    const auto cat = two_app_catalog();
    const auto vec = distance_vector(cat, "a1", "a2", "c0", {"prbs", "throughput"});
    const double d_prbs = std::sqrt(1.0 / 3.0);

    Aggregator mean{AggKind::WeightedMean, {}};
    CHECK(severity(vec, {"prbs", "throughput"}, mean) ==
          doctest::Approx(d_prbs / 2.0));

    Aggregator weighted{AggKind::WeightedMean, {{"prbs", 3.0}, {"throughput", 1.0}}};
    CHECK(severity(vec, {"prbs", "throughput"}, weighted) ==
          doctest::Approx(3.0 * d_prbs / 4.0));

    Aggregator median{AggKind::Median, {}};
    // lower median of {0, d_prbs} is 0
    CHECK(severity(vec, {"prbs", "throughput"}, median) == 0.0);

    Aggregator max{AggKind::Max, {}};
    CHECK(severity(vec, {"prbs", "throughput"}, max) == doctest::Approx(d_prbs));

    CHECK_THROWS_AS(severity(vec, {}, mean), InputError);
    Aggregator missing_weight{AggKind::WeightedMean, {{"prbs", 1.0}}};
    CHECK_THROWS_AS(severity(vec, {"prbs", "throughput"}, missing_weight),
                    InputError);
}

TEST_CASE("severity matrix is complete, symmetric-by-key, and zero on diagonal") {
    const auto cat = two_app_catalog();
    Aggregator mean{AggKind::WeightedMean, {}};
    const auto m = severity_matrix(cat, {"a1", "a2"}, "c0", {"throughput", "buffer"},
                                   mean, Metric::Int);
    CHECK(m.at({"a1", "a1"}) == 0.0);
    CHECK(m.at({"a2", "a2"}) == 0.0);
    CHECK(m.count(make_pair_key("a2", "a1")) == 1);
    CHECK(m.at({"a1", "a2"}) > 0.0);
}

TEST_CASE("report is byte-identical across repeated generation") {
    const auto cat = two_app_catalog();
    const auto g = trivial_graph(cat);
    KpmFocus focus{{}, {"throughput", "buffer"}};
    Aggregator mean{AggKind::WeightedMean, {}};
    const auto r1 = generate_report(cat, g, {"a1", "a2"}, "c0", focus, mean);
    const auto r2 = generate_report(cat, g, {"a1", "a2"}, "c0", focus, mean);
    CHECK(r1.dump() == r2.dump());

    CHECK(r1.contains("existence"));
    CHECK(r1.contains("severity"));
    CHECK(r1.contains("graphs"));
    CHECK(r1.contains("metadata"));
    // both apps control prbs -> direct conflict must surface
    CHECK(r1["existence"]["direct"].contains("prbs"));
    CHECK(r1["severity"]["kpms"].contains("a1,a2"));
}

TEST_CASE("report defaults an empty focus to the shared variables") {
    const auto cat = two_app_catalog();
    const auto g = trivial_graph(cat);
    Aggregator mean{AggKind::WeightedMean, {}};
    const auto r = generate_report(cat, g, {"a1", "a2"}, "c0", {}, mean);
    // scheduler is categorical and shared, so the kpm focus mixes types
    CHECK(r["metadata"]["mixed_categorical_numeric_focus"] == true);
    CHECK(r["severity"]["parameters"].contains("a1,a2"));
}

TEST_CASE("ecdf csv dump lists every numeric curve") {
    const auto cat = two_app_catalog();
    std::ostringstream out;
    write_ecdf_csv(cat, out);
    const std::string csv = out.str();
    CHECK(csv.rfind("app,condition,variable,x,F", 0) == 0);
    CHECK(csv.find("a1,c0,prbs,1,") != std::string::npos);
    CHECK(csv.find("a2,c0,buffer,100,1") != std::string::npos);
}
