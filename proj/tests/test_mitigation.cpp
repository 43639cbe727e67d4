#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ranconf/mitigation.hpp"

using namespace ranconf;

namespace {

std::map<AppPair, double> matrix(
    std::initializer_list<std::pair<std::pair<const char*, const char*>, double>> init) {
    std::map<AppPair, double> m;
    for (const auto& [pr, v] : init) m[make_pair_key(pr.first, pr.second)] = v;
    return m;
}

}  // namespace

TEST_CASE("tolerance policy validation") {
    TolerancePolicy p;
    p.global = 1.5;
    CHECK_THROWS_AS(p.validate(), InputError);
    p.global = 0.3;
    p.per_kpm["thr"] = -0.1;
    CHECK_THROWS_AS(p.validate(), InputError);
    p.per_kpm["thr"] = 0.2;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("coexistence matrix applies the global threshold") {
    const auto sev = matrix({{{"a1", "a2"}, 0.21}, {{"a1", "a3"}, 0.35}});
    TolerancePolicy p;
    p.global = 0.25;
    const auto coex = coexistence_matrix(sev, p);
    CHECK(coex.at(make_pair_key("a1", "a2")));
    CHECK_FALSE(coex.at(make_pair_key("a1", "a3")));
}

TEST_CASE("per-kpm thresholds take precedence over the global one") {
    std::map<AppPair, std::map<std::string, double>> dists;
    dists[make_pair_key("a1", "a2")] = {{"thr", 0.10}, {"buf", 0.30}};
    TolerancePolicy p;
    p.global = 0.01;  // would reject, but per-kpm wins
    p.per_kpm = {{"thr", 0.2}, {"buf", 0.4}};
    CHECK(coexistence_matrix(dists, p).at(make_pair_key("a1", "a2")));
    p.per_kpm["buf"] = 0.2;
    CHECK_FALSE(coexistence_matrix(dists, p).at(make_pair_key("a1", "a2")));
    p.per_kpm = {{"missing", 0.5}};
    CHECK_THROWS_AS(coexistence_matrix(dists, p), InputError);
}

TEST_CASE("greedy admits by priority and rejects over-tolerance apps") {
    const auto sev = matrix({{{"a1", "a2"}, 0.10},
                             {{"a1", "a3"}, 0.40},
                             {{"a2", "a3"}, 0.05}});
    const std::map<std::string, double> prio{{"a1", 50}, {"a2", 40}, {"a3", 30}};
    TolerancePolicy p;
    p.global = 0.25;
    const auto plan = greedy_deploy({"a1", "a2", "a3"}, prio, sev, p);
    CHECK(plan.deployed == std::vector<std::string>{"a1", "a2"});
    REQUIRE(plan.rejected.size() == 1);
    CHECK(plan.rejected[0].app == "a3");
    CHECK(plan.rejected[0].blocking_app == "a1");
    CHECK(plan.rejected[0].blocking_severity == doctest::Approx(0.40));
}

TEST_CASE("greedy is order dependent: a high-priority app can crowd out two") {
    // a1 conflicts with both a2 and a3, which are mutually compatible
    const auto sev = matrix({{{"a1", "a2"}, 0.50},
                             {{"a1", "a3"}, 0.50},
                             {{"a2", "a3"}, 0.10}});
    TolerancePolicy p;
    p.global = 0.25;
    const auto high_a1 = greedy_deploy(
        {"a1", "a2", "a3"}, {{"a1", 90}, {"a2", 40}, {"a3", 30}}, sev, p);
    CHECK(high_a1.deployed == std::vector<std::string>{"a1"});
    const auto low_a1 = greedy_deploy(
        {"a1", "a2", "a3"}, {{"a1", 10}, {"a2", 40}, {"a3", 30}}, sev, p);
    CHECK(low_a1.deployed == std::vector<std::string>{"a2", "a3"});
}

TEST_CASE("conflict-free apps are seeded regardless of priority") {
    const auto sev = matrix({{{"a1", "a2"}, 0.0},
                             {{"a1", "a3"}, 0.0},
                             {{"a2", "a3"}, 0.30}});
    TolerancePolicy p;
    p.global = 0.25;
    const auto plan = greedy_deploy({"a1", "a2", "a3"},
                                    {{"a1", 1}, {"a2", 99}, {"a3", 98}}, sev, p);
    // a1 has zero severity against everyone: seeded in step 1
    CHECK(plan.deployed.front() == "a1");
    // then a2 (priority 99), and a3 is blocked by a2
    CHECK(plan.deployed == std::vector<std::string>{"a1", "a2"});
}

TEST_CASE("predeployed apps are never evicted and constrain admission") {
    const auto sev = matrix({{{"a1", "a2"}, 0.50}, {{"a1", "a3"}, 0.10},
                             {{"a2", "a3"}, 0.10}});
    TolerancePolicy p;
    p.global = 0.25;
    const auto plan =
        greedy_deploy({"a1", "a3"}, {{"a1", 99}, {"a3", 10}}, sev, p, {"a2"});
    CHECK(plan.deployed.front() == "a2");
    // a1 conflicts with the predeployed a2 despite its priority
    REQUIRE(plan.rejected.size() == 1);
    CHECK(plan.rejected[0].app == "a1");
    CHECK(plan.deployed == std::vector<std::string>{"a2", "a3"});
}

TEST_CASE("priority ties break lexicographically") {
    const auto sev = matrix({{{"a1", "a2"}, 0.50}, {{"a1", "a3"}, 0.10},
                             {{"a2", "a3"}, 0.10}});
    TolerancePolicy p;
    p.global = 0.25;
    const auto plan = greedy_deploy({"a1", "a2", "a3"},
                                    {{"a1", 50}, {"a2", 50}, {"a3", 10}}, sev, p);
    CHECK(plan.deployed == std::vector<std::string>{"a1", "a3"});
}

TEST_CASE("monotonicity: loosening the tolerance never shrinks the deployment") {
    const auto sev = matrix({{{"a1", "a2"}, 0.10},
                             {{"a1", "a3"}, 0.30},
                             {{"a2", "a3"}, 0.20}});
    const std::map<std::string, double> prio{{"a1", 50}, {"a2", 40}, {"a3", 30}};
    std::size_t prev = 0;
    for (double tol : {0.05, 0.15, 0.25, 0.35}) {
        TolerancePolicy p;
        p.global = tol;
        const auto plan = greedy_deploy({"a1", "a2", "a3"}, prio, sev, p);
        // soundness: every deployed pair respects the tolerance
        for (std::size_t i = 0; i < plan.deployed.size(); ++i)
            for (std::size_t j = i + 1; j < plan.deployed.size(); ++j)
                CHECK(sev.at(make_pair_key(plan.deployed[i], plan.deployed[j])) <=
                      tol);
        CHECK(plan.deployed.size() >= prev);
        prev = plan.deployed.size();
    }
}

TEST_CASE("an incomplete severity matrix is a usage error") {
    const auto sev = matrix({{{"a1", "a2"}, 0.10}});
    TolerancePolicy p;
    CHECK_THROWS_AS(greedy_deploy({"a1", "a2", "a3"},
                                  {{"a1", 3}, {"a2", 2}, {"a3", 1}}, sev, p),
                    InputError);
}
