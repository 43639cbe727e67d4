#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ranconf {

// Thrown for any precondition / input-validation failure.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Right-continuous empirical step function. F(x) is the F of the greatest
// point <= x, or 0 below the first point. The last F must be 1.
struct Ecdf {
    std::vector<std::pair<double, double>> points;  // (x, F), x strictly increasing
    std::uint64_t n = 0;                            // sample count behind the curve

    double at(double x) const;
    double min_x() const { return points.front().first; }
    double max_x() const { return points.back().first; }
    void validate() const;  // throws InputError on malformed step data
};

struct CategoricalDist {
    std::map<std::string, std::uint64_t> counts;

    std::uint64_t total() const;
    void validate() const;
};

enum class Metric { Ks, Int, Chi };

struct DistanceValue {
    Metric metric;
    double value;  // always in [0,1]
};

// ECDF from raw samples: sorted distinct values, F(x_i) = #{samples <= x_i}/n.
Ecdf build_ecdf(std::vector<double> samples);

// Sup over the pooled breakpoints of |F1 - F2|.
DistanceValue ks_distance(const Ecdf& f1, const Ecdf& f2);

// sqrt((1/L) * integral of |F1 - F2| dx) with L = hi - lo. Default range is
// the pooled sample min/max; an explicit range must cover both supports.
// Degenerate L == 0 (both curves a single identical point) gives 0.
DistanceValue int_distance(const Ecdf& f1, const Ecdf& f2,
                           std::optional<std::pair<double, double>> range = {});

// 1 - p of the Pearson chi-square homogeneity test on the 2 x k table.
// Labels with zero total count are dropped; fewer than 2 surviving labels
// give distance 0.
DistanceValue chi_distance(const CategoricalDist& c1, const CategoricalDist& c2);

// For each requested size N: KS distance between the ECDF of the first N
// elements of a seeded shuffle and the full-sample ECDF.
std::vector<std::pair<std::uint64_t, double>> sufficiency_curve(
    const std::vector<double>& samples, const std::vector<std::uint64_t>& sizes,
    std::uint64_t seed);

// Upper-tail regularized incomplete gamma Q(a, x); chi-square survival is
// Q(dof/2, x/2). Exposed for tests.
double gamma_q(double a, double x);
double chi_square_sf(double statistic, double dof);

}  // namespace ranconf
