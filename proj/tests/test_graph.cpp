#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ranconf/graph.hpp"

using namespace ranconf;
using nlohmann::json;

namespace {

Catalog catalog_with(const std::map<std::string, std::set<std::string>>& control,
                     const std::set<std::string>& params,
                     const std::set<std::string>& kpms) {
    json doc;
    doc["variables"] = json::array();
    for (const auto& p : params)
        doc["variables"].push_back(
            {{"name", p}, {"kind", "parameter"}, {"value_type", "numeric"}});
    for (const auto& k : kpms)
        doc["variables"].push_back(
            {{"name", k}, {"kind", "kpm"}, {"value_type", "numeric"}});
    doc["conditions"] = json::array({{{"id", "c0"}}});
    doc["applications"] = json::array();
    for (const auto& [app, ps] : control) {
        json dists = json::object();
        for (const auto& p : ps)
            dists[p] = {{"type", "ecdf"}, {"n", 1}, {"points", {{0.0, 1.0}}}};
        json profiles = json::object();
        profiles["c0"]["distributions"] = dists;
        doc["applications"].push_back({{"id", app},
                                       {"parameters", ps},
                                       {"priority", 0},
                                       {"profiles", profiles}});
    }
    return Catalog::from_json(doc);
}

ConflictGraph graph_of(const Catalog& cat,
                       const std::set<std::pair<std::string, std::string>>& pi,
                       const std::set<std::pair<std::string, std::string>>& eps) {
    json doc;
    doc["param_edges"] = json::array();
    for (const auto& [a, b] : pi) doc["param_edges"].push_back({a, b});
    doc["kpm_edges"] = json::array();
    for (const auto& [p, k] : eps) doc["kpm_edges"].push_back({p, k});
    return ConflictGraph::from_json(doc, cat);
}

}  // namespace

TEST_CASE("direct conflicts: a parameter with two controllers") {
    const auto cat = catalog_with({{"a1", {"p1", "p2"}}, {"a2", {"p2"}}},
                                  {"p1", "p2"}, {});
    const auto g = graph_of(cat, {}, {});
    const auto aug = build_augmented(cat, g, {"a1", "a2"});
    const auto direct = detect_direct(aug);
    REQUIRE(direct.size() == 1);
    CHECK(direct.at("p2") == std::set<std::string>{"a1", "a2"});
}

TEST_CASE("parameter-coupling toy: one cross edge flags the downstream parameter") {
    // a1 -> p1, a2 -> p3, edge p1 -> p3: p3 sees two influences (p1 plus its
    // own controller's identity edge)
    const auto cat = catalog_with({{"a1", {"p1"}}, {"a2", {"p3"}}}, {"p1", "p3"}, {});
    const auto g = graph_of(cat, {{"p1", "p3"}}, {});
    const auto aug = build_augmented(cat, g, {"a1", "a2"});
    const auto [conflicted, influencers] = detect_parameter(aug);
    REQUIRE(conflicted.size() == 1);
    CHECK(conflicted.at("p3") == std::set<std::string>{"a2"});
    CHECK(influencers.at("p3") == std::set<std::string>{"a1"});
    CHECK(detect_direct(aug).empty());
}

TEST_CASE("parameter coupling does not close transitively") {
    // chain p1 -> p2 -> p3 with one controller each: p2 and p3 are flagged,
    // but p1 is not reached through the chain
    const auto cat = catalog_with({{"a1", {"p1"}}, {"a2", {"p2"}}, {"a3", {"p3"}}},
                                  {"p1", "p2", "p3"}, {});
    const auto g = graph_of(cat, {{"p1", "p2"}, {"p2", "p3"}}, {});
    const auto aug = build_augmented(cat, g, {"a1", "a2", "a3"});
    const auto [conflicted, influencers] = detect_parameter(aug);
    CHECK(conflicted.size() == 2);
    CHECK(conflicted.count("p2") == 1);
    CHECK(conflicted.count("p3") == 1);
    CHECK(influencers.at("p3") == std::set<std::string>{"a2"});
}

TEST_CASE("kpm-coupling toy: two controlled parameters feed one kpm") {
    const auto cat = catalog_with({{"a1", {"p1"}}, {"a2", {"p2"}}}, {"p1", "p2"},
                                  {"k1"});
    const auto g = graph_of(cat, {}, {{"p1", "k1"}, {"p2", "k1"}});
    const auto aug = build_augmented(cat, g, {"a1", "a2"});
    const auto kpm = detect_kpm(aug);
    REQUIRE(kpm.size() == 1);
    CHECK(kpm.at("k1") == std::set<std::string>{"a1", "a2"});
    // an uncontrolled influencing parameter does not count
    const auto g2 = graph_of(cat, {}, {{"p1", "k1"}});
    const auto aug2 = build_augmented(cat, g2, {"a1", "a2"});
    CHECK(detect_kpm(aug2).empty());
}

TEST_CASE("detection is scoped to the requested app subset") {
    const auto cat = catalog_with({{"a1", {"p1"}}, {"a2", {"p1"}}}, {"p1"}, {});
    const auto g = graph_of(cat, {}, {});
    const auto only_one = build_augmented(cat, g, {"a1"});
    CHECK_FALSE(detect_all(only_one).any());
    const auto both = build_augmented(cat, g, {"a1", "a2"});
    CHECK(detect_all(both).any());
}

TEST_CASE("augmented graph rejects apps controlling unknown graph parameters") {
    const auto cat = catalog_with({{"a1", {"p1"}}}, {"p1"}, {});
    ConflictGraph g;  // hand-built graph missing p1
    g.params = {"pX"};
    CHECK_THROWS_AS(build_augmented(cat, g, {"a1"}), InputError);
}

TEST_CASE("random graphs agree with a naive oracle") {
    std::mt19937_64 rng(123);
    for (int rep = 0; rep < 200; ++rep) {
        const int n_apps = 2 + static_cast<int>(rng() % 5);
        const int n_params = 2 + static_cast<int>(rng() % 8);
        const int n_kpms = 1 + static_cast<int>(rng() % 5);
        std::set<std::string> params, kpms;
        for (int i = 0; i < n_params; ++i) params.insert("p" + std::to_string(i));
        for (int i = 0; i < n_kpms; ++i) kpms.insert("k" + std::to_string(i));
        std::map<std::string, std::set<std::string>> control;
        for (int i = 0; i < n_apps; ++i) {
            std::set<std::string> ps;
            for (const auto& p : params)
                if (rng() % 4 == 0) ps.insert(p);
            if (ps.empty()) ps.insert("p" + std::to_string(rng() % n_params));
            control["a" + std::to_string(i)] = ps;
        }
        std::set<std::pair<std::string, std::string>> pi, eps;
        for (const auto& p : params) {
            for (const auto& q : params)
                if (p != q && rng() % 6 == 0) pi.insert({p, q});
            for (const auto& k : kpms)
                if (rng() % 4 == 0) eps.insert({p, k});
        }
        const auto cat = catalog_with(control, params, kpms);
        const auto g = graph_of(cat, pi, eps);
        std::set<std::string> app_ids;
        for (const auto& [a, _] : control) app_ids.insert(a);
        const auto aug = build_augmented(cat, g, app_ids);
        const auto det = detect_all(aug);

        // oracle: recompute each set straight from the definitions
        std::set<std::string> controlled;
        for (const auto& [a, ps] : control) controlled.insert(ps.begin(), ps.end());
        for (const auto& p : params) {
            int ctrl = 0;
            for (const auto& [a, ps] : control) ctrl += ps.count(p);
            CHECK((ctrl > 1) == (det.direct.count(p) == 1));
            std::set<std::string> sources;
            if (controlled.count(p)) sources.insert(p);
            for (const auto& [src, dst] : pi)
                if (dst == p && controlled.count(src)) sources.insert(src);
            CHECK((sources.size() > 1) == (det.parameter.count(p) == 1));
        }
        for (const auto& k : kpms) {
            std::set<std::string> feeders;
            for (const auto& [p, kk] : eps)
                if (kk == k && controlled.count(p)) feeders.insert(p);
            CHECK((feeders.size() >= 2) == (det.kpm.count(k) == 1));
        }
    }
}

TEST_CASE("graph json round-trip") {
    const auto cat = catalog_with({{"a1", {"p1"}}, {"a2", {"p2"}}}, {"p1", "p2"},
                                  {"k1"});
    const auto g = graph_of(cat, {{"p1", "p2"}}, {{"p1", "k1"}});
    const auto g2 = ConflictGraph::from_json(g.to_json(), cat);
    CHECK(g2.to_json() == g.to_json());
}
