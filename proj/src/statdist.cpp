#include "ranconf/statdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace ranconf {

double Ecdf::at(double x) const {
    // points are sorted by x; find greatest point <= x
    auto it = std::upper_bound(points.begin(), points.end(), x,
                               [](double v, const std::pair<double, double>& p) {
                                   return v < p.first;
                               });
    if (it == points.begin()) return 0.0;
    return std::prev(it)->second;
}

void Ecdf::validate() const {
    if (points.empty()) throw InputError("ecdf: no step points");
    double px = -std::numeric_limits<double>::infinity();
    double pf = 0.0;
    for (const auto& [x, f] : points) {
        if (!(x > px)) throw InputError("ecdf: x values not strictly increasing");
        if (f < pf || f < 0.0 || f > 1.0)
            throw InputError("ecdf: F values not non-decreasing in [0,1]");
        px = x;
        pf = f;
    }
    if (std::abs(points.back().second - 1.0) > 1e-12)
        throw InputError("ecdf: last F must equal 1.0");
}

std::uint64_t CategoricalDist::total() const {
    std::uint64_t t = 0;
    for (const auto& [_, c] : counts) t += c;
    return t;
}

void CategoricalDist::validate() const {
    if (total() == 0) throw InputError("categorical: all counts zero");
}

Ecdf build_ecdf(std::vector<double> samples) {
    if (samples.empty()) throw InputError("build_ecdf: empty sample list");
    std::sort(samples.begin(), samples.end());
    Ecdf e;
    e.n = samples.size();
    const double n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
        e.points.emplace_back(samples[i], static_cast<double>(i + 1) / n);
    }
    e.points.back().second = 1.0;
    return e;
}

namespace {

std::vector<double> pooled_breakpoints(const Ecdf& f1, const Ecdf& f2) {
    std::vector<double> xs;
    xs.reserve(f1.points.size() + f2.points.size());
    for (const auto& [x, _] : f1.points) xs.push_back(x);
    for (const auto& [x, _] : f2.points) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

}  // namespace

DistanceValue ks_distance(const Ecdf& f1, const Ecdf& f2) {
    f1.validate();
    f2.validate();
    double sup = 0.0;
    for (double x : pooled_breakpoints(f1, f2))
        sup = std::max(sup, std::abs(f1.at(x) - f2.at(x)));
    return {Metric::Ks, sup};
}

DistanceValue int_distance(const Ecdf& f1, const Ecdf& f2,
                           std::optional<std::pair<double, double>> range) {
    f1.validate();
    f2.validate();
    double lo = std::min(f1.min_x(), f2.min_x());
    double hi = std::max(f1.max_x(), f2.max_x());
    if (range) {
        if (range->first >= range->second)
            throw InputError("int_distance: range lo must be < hi");
        if (range->first > lo || range->second < hi)
            throw InputError("int_distance: range does not cover both supports");
        lo = range->first;
        hi = range->second;
    }
    if (hi == lo) return {Metric::Int, 0.0};  // single shared point
    std::vector<double> xs;
    xs.push_back(lo);
    for (double x : pooled_breakpoints(f1, f2))
        if (x > lo && x < hi) xs.push_back(x);
    xs.push_back(hi);
    // |F1 - F2| is constant on [xs[i], xs[i+1])
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        integral += std::abs(f1.at(xs[i]) - f2.at(xs[i])) * (xs[i + 1] - xs[i]);
    return {Metric::Int, std::sqrt(integral / (hi - lo))};
}

namespace {

// Regularized lower incomplete gamma P(a,x) by power series.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a,x) by Lentz continued fraction.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (a <= 0.0) throw InputError("gamma_q: a must be positive");
    if (x < 0.0) throw InputError("gamma_q: x must be non-negative");
    if (x == 0.0) return 1.0;
    // series converges fast for x < a+1, continued fraction for x >= a+1
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi_square_sf(double statistic, double dof) {
    return gamma_q(dof / 2.0, statistic / 2.0);
}

DistanceValue chi_distance(const CategoricalDist& c1, const CategoricalDist& c2) {
    c1.validate();
    c2.validate();
    std::set<std::string> labels;
    for (const auto& [l, _] : c1.counts) labels.insert(l);
    for (const auto& [l, _] : c2.counts) labels.insert(l);

    auto count = [](const CategoricalDist& c, const std::string& l) -> double {
        auto it = c.counts.find(l);
        return it == c.counts.end() ? 0.0 : static_cast<double>(it->second);
    };

    std::vector<std::pair<double, double>> cols;  // surviving (o1, o2)
    for (const auto& l : labels) {
        double o1 = count(c1, l), o2 = count(c2, l);
        if (o1 + o2 > 0.0) cols.emplace_back(o1, o2);
    }
    if (cols.size() < 2) return {Metric::Chi, 0.0};

    double r1 = 0.0, r2 = 0.0;
    for (const auto& [o1, o2] : cols) {
        r1 += o1;
        r2 += o2;
    }
    const double total = r1 + r2;
    double stat = 0.0;
    for (const auto& [o1, o2] : cols) {
        const double colsum = o1 + o2;
        const double e1 = r1 * colsum / total;
        const double e2 = r2 * colsum / total;
        stat += (o1 - e1) * (o1 - e1) / e1 + (o2 - e2) * (o2 - e2) / e2;
    }
    const double dof = static_cast<double>(cols.size()) - 1.0;
    const double p = chi_square_sf(stat, dof);
    return {Metric::Chi, 1.0 - p};
}

std::vector<std::pair<std::uint64_t, double>> sufficiency_curve(
    const std::vector<double>& samples, const std::vector<std::uint64_t>& sizes,
    std::uint64_t seed) {
    if (samples.empty()) throw InputError("sufficiency_curve: empty sample list");
    for (auto s : sizes)
        if (s == 0 || s > samples.size())
            throw InputError("sufficiency_curve: size out of range");
    const Ecdf full = build_ecdf(samples);
    std::vector<double> shuffled = samples;
    std::mt19937_64 eng(seed);
    std::shuffle(shuffled.begin(), shuffled.end(), eng);
    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(sizes.size());
    for (auto s : sizes) {
        if (s == samples.size()) {
            out.emplace_back(s, 0.0);
            continue;
        }
        std::vector<double> head(shuffled.begin(), shuffled.begin() + s);
        out.emplace_back(s, ks_distance(build_ecdf(std::move(head)), full).value);
    }
    return out;
}

}  // namespace ranconf
