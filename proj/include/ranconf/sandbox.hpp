#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ranconf/catalog.hpp"

namespace ranconf {
namespace sandbox {

inline constexpr int kNumSlices = 3;
inline constexpr std::array<const char*, kNumSlices> kSliceNames = {"embb", "urllc",
                                                                    "mmtc"};
inline constexpr double kTickSeconds = 0.25;

struct SlicingPolicy {
    std::array<int, kNumSlices> prbs{};  // multiples of rbg_size, sum <= budget
};

struct StochasticXapp {
    std::string id;
    std::array<double, kNumSlices> means{};  // target PRBs per slice
    double sigma = 1.5;
    double priority = 0.0;
};

struct KpmModel {
    double per_prb_rate_mbps = 0.167;  // fluid-queue service rate per PRB
    // offered load: eMBB constant bit rate, URLLC/mMTC Poisson byte arrivals
    double embb_cbr_mbps = 4.0;
    double urllc_mean_kbps = 89.29;
    double mmtc_mean_kbps = 44.64;
    std::array<long long, kNumSlices> buffer_bytes{};  // queue backlog state
};

struct KpmSample {
    std::array<double, kNumSlices> throughput_mbps{};
    std::array<long long, kNumSlices> buffer_bytes{};
    std::array<long long, kNumSlices> served_bytes{};
    std::array<long long, kNumSlices> arrived_bytes{};
};

struct StabilityMetrics {
    double cov;
    double stdev;
    double rmssd;
};

struct Scenario {
    OperationalCondition condition;
    std::vector<StochasticXapp> xapps;
    KpmModel model;
    int budget = 50;    // total PRBs
    int rbg_size = 3;   // PRBs per resource block group
    std::uint64_t n_ticks = 61851;

    static Scenario from_json(const nlohmann::json& doc);
    static Scenario load_file(const std::string& path);
    const StochasticXapp& xapp(const std::string& id) const;
};

// Gaussian draw per slice, rounded half-to-even on the RBG index and clamped
// at zero; while the total exceeds the budget the largest slice loses one
// RBG (ties: the later slice in eMBB, URLLC, mMTC order).
SlicingPolicy draw_policy(const StochasticXapp& xapp, std::mt19937_64& rng,
                          int budget = 50, int rbg_size = 3);

// One fluid-queue step: served = min(arrivals + backlog, capacity). All byte
// accounting is integral, so conservation holds exactly.
KpmSample step_kpms(KpmModel& model, const SlicingPolicy& policy, std::mt19937_64& rng);

// Profiles one xApp in isolation: n_ticks policy draws + KPM responses,
// reduced to ECDFs over <slice>_prbs / <slice>_throughput / <slice>_buffer.
StatisticalProfile run_profile(const StochasticXapp& xapp, const std::string& condition,
                               const KpmModel& model, std::uint64_t n_ticks,
                               std::uint64_t seed, int budget = 50, int rbg_size = 3);

struct CoexistSeries {
    // effective (post-arbitration) per-slice PRB allocation per tick
    std::array<std::vector<double>, kNumSlices> prbs;
    std::array<std::vector<double>, kNumSlices> throughput_mbps;
    std::array<std::vector<double>, kNumSlices> buffer_bytes;
};

// All xApps draw a policy every tick; writes land in round-robin order with
// a rotating start, so the last writer alternates across ticks
// (last-writer-wins arbitration).
CoexistSeries coexist_sim(const std::vector<StochasticXapp>& xapps, KpmModel model,
                          std::uint64_t n_ticks, std::uint64_t seed, int budget = 50,
                          int rbg_size = 3);

// cov = stdev / mean (error on zero mean); stdev is the population standard
// deviation; rmssd = sqrt(mean of squared successive differences).
StabilityMetrics stability_metrics(const std::vector<double>& series);

}  // namespace sandbox
}  // namespace ranconf
