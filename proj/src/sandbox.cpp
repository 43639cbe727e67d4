#include "ranconf/sandbox.hpp"

#include <cmath>
#include <fstream>

namespace ranconf {
namespace sandbox {

namespace {

double bytes_to_mbps(long long bytes) {
    return static_cast<double>(bytes) * 8.0 / kTickSeconds / 1e6;
}

}  // namespace

SlicingPolicy draw_policy(const StochasticXapp& xapp, std::mt19937_64& rng, int budget,
                          int rbg_size) {
    std::array<int, kNumSlices> idx{};
    for (int s = 0; s < kNumSlices; ++s) {
        std::normal_distribution<double> dist(xapp.means[s], xapp.sigma);
        const double draw = dist(rng);
        // round half-to-even on the RBG index (nearbyint under the default
        // FE_TONEAREST mode), then clamp at zero
        int i = static_cast<int>(std::nearbyint(draw / rbg_size));
        idx[s] = i < 0 ? 0 : i;
    }
    auto total = [&idx] { return idx[0] + idx[1] + idx[2]; };
    while (total() * rbg_size > budget) {
        int j = 0;
        for (int s = 1; s < kNumSlices; ++s)
            if (idx[s] >= idx[j]) j = s;  // >= picks the later slice on ties
        --idx[j];
    }
    SlicingPolicy p;
    for (int s = 0; s < kNumSlices; ++s) p.prbs[s] = idx[s] * rbg_size;
    return p;
}

KpmSample step_kpms(KpmModel& model, const SlicingPolicy& policy, std::mt19937_64& rng) {
    KpmSample out;
    const double means_kbps[kNumSlices] = {0.0, model.urllc_mean_kbps,
                                           model.mmtc_mean_kbps};
    for (int s = 0; s < kNumSlices; ++s) {
        long long arrivals;
        if (s == 0) {
            // constant bit rate, integral bytes per tick
            arrivals = static_cast<long long>(model.embb_cbr_mbps * 1e6 * kTickSeconds /
                                              8.0);
        } else {
            std::poisson_distribution<long long> dist(means_kbps[s] * 1000.0 *
                                                      kTickSeconds / 8.0);
            arrivals = dist(rng);
        }
        // integral capacity keeps the byte ledger exact
        const long long capacity = static_cast<long long>(
            model.per_prb_rate_mbps * 1e6 * policy.prbs[s] * kTickSeconds / 8.0);
        const long long queue = model.buffer_bytes[s] + arrivals;
        const long long served = queue < capacity ? queue : capacity;
        model.buffer_bytes[s] = queue - served;
        out.arrived_bytes[s] = arrivals;
        out.served_bytes[s] = served;
        out.buffer_bytes[s] = model.buffer_bytes[s];
        out.throughput_mbps[s] = bytes_to_mbps(served);
    }
    return out;
}

StatisticalProfile run_profile(const StochasticXapp& xapp, const std::string& condition,
                               const KpmModel& model, std::uint64_t n_ticks,
                               std::uint64_t seed, int budget, int rbg_size) {
    if (n_ticks == 0) throw InputError("run_profile: n_ticks must be >= 1");
    std::mt19937_64 rng(seed);
    KpmModel state = model;
    std::array<std::vector<double>, kNumSlices> prbs, thr, buf;
    for (int s = 0; s < kNumSlices; ++s) {
        prbs[s].reserve(n_ticks);
        thr[s].reserve(n_ticks);
        buf[s].reserve(n_ticks);
    }
    for (std::uint64_t t = 0; t < n_ticks; ++t) {
        const SlicingPolicy p = draw_policy(xapp, rng, budget, rbg_size);
        const KpmSample k = step_kpms(state, p, rng);
        for (int s = 0; s < kNumSlices; ++s) {
            prbs[s].push_back(p.prbs[s]);
            thr[s].push_back(k.throughput_mbps[s]);
            buf[s].push_back(static_cast<double>(k.buffer_bytes[s]));
        }
    }
    StatisticalProfile sp;
    sp.condition = condition;
    for (int s = 0; s < kNumSlices; ++s) {
        const std::string slice = kSliceNames[s];
        sp.distributions[slice + "_prbs"] = build_ecdf(prbs[s]);
        sp.distributions[slice + "_throughput"] = build_ecdf(thr[s]);
        sp.distributions[slice + "_buffer"] = build_ecdf(buf[s]);
    }
    for (const auto& [var, dist] : sp.distributions)
        sp.sample_count[var] = std::get<Ecdf>(dist).n;
    return sp;
}

CoexistSeries coexist_sim(const std::vector<StochasticXapp>& xapps, KpmModel model,
                          std::uint64_t n_ticks, std::uint64_t seed, int budget,
                          int rbg_size) {
    if (xapps.empty()) throw InputError("coexist_sim: need at least one xapp");
    std::mt19937_64 rng(seed);
    CoexistSeries out;
    const std::size_t n = xapps.size();
    for (std::uint64_t t = 0; t < n_ticks; ++t) {
        SlicingPolicy effective{};
        // rotate the write order so the last writer alternates tick to tick
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t who = (t + i) % n;
            effective = draw_policy(xapps[who], rng, budget, rbg_size);
        }
        const KpmSample k = step_kpms(model, effective, rng);
        for (int s = 0; s < kNumSlices; ++s) {
            out.prbs[s].push_back(effective.prbs[s]);
            out.throughput_mbps[s].push_back(k.throughput_mbps[s]);
            out.buffer_bytes[s].push_back(static_cast<double>(k.buffer_bytes[s]));
        }
    }
    return out;
}

StabilityMetrics stability_metrics(const std::vector<double>& series) {
    if (series.size() < 2)
        throw InputError("stability_metrics: need a series of length >= 2");
    const double n = static_cast<double>(series.size());
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    var /= n;  // population variance
    double ssd = 0.0;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        const double d = series[i + 1] - series[i];
        ssd += d * d;
    }
    StabilityMetrics m;
    m.stdev = std::sqrt(var);
    m.rmssd = std::sqrt(ssd / (n - 1.0));
    if (mean == 0.0) {
        if (m.stdev == 0.0)
            m.cov = 0.0;  // constant zero series
        else
            throw InputError("stability_metrics: cov undefined for zero mean");
    } else {
        m.cov = m.stdev / mean;
    }
    return m;
}

Scenario Scenario::from_json(const nlohmann::json& doc) {
    Scenario sc;
    const auto& jc = doc.at("condition");
    sc.condition.id = jc.at("id").get<std::string>();
    const auto descriptors = jc.value("descriptors", nlohmann::json::object());
    for (const auto& [k, v] : descriptors.items())
        sc.condition.descriptors[k] = v.get<std::string>();
    for (const auto& jx : doc.at("xapps")) {
        StochasticXapp x;
        x.id = jx.at("id").get<std::string>();
        const auto& means = jx.at("means");
        for (int s = 0; s < kNumSlices; ++s)
            x.means[s] = means.at(kSliceNames[s]).get<double>();
        x.sigma = jx.value("sigma", 1.5);
        x.priority = jx.value("priority", 0.0);
        if (x.sigma <= 0.0)
            throw InputError("scenario: sigma must be positive for xapp '" + x.id + "'");
        for (double m : x.means)
            if (m < 0.0)
                throw InputError("scenario: negative mean for xapp '" + x.id + "'");
        sc.xapps.push_back(x);
    }
    if (doc.contains("model")) {
        const auto& jm = doc["model"];
        sc.model.per_prb_rate_mbps = jm.value("per_prb_rate_mbps", 0.167);
        sc.model.embb_cbr_mbps = jm.value("embb_cbr_mbps", 4.0);
        sc.model.urllc_mean_kbps = jm.value("urllc_mean_kbps", 89.29);
        sc.model.mmtc_mean_kbps = jm.value("mmtc_mean_kbps", 44.64);
    }
    sc.budget = doc.value("budget", 50);
    sc.rbg_size = doc.value("rbg_size", 3);
    sc.n_ticks = doc.value("n_ticks", std::uint64_t{61851});
    if (sc.budget <= 0 || sc.rbg_size <= 0)
        throw InputError("scenario: budget and rbg_size must be positive");
    return sc;
}

Scenario Scenario::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("scenario: cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("scenario: invalid JSON in '" + path + "': " + e.what());
    }
    return from_json(doc);
}

const StochasticXapp& Scenario::xapp(const std::string& id) const {
    for (const auto& x : xapps)
        if (x.id == id) return x;
    throw InputError("scenario: unknown xapp '" + id + "'");
}

}  // namespace sandbox
}  // namespace ranconf
