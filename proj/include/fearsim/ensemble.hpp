#pragma once

// Monte Carlo ensembles: replications fan out across threads, each owning its
// population state and seed-derived streams; summaries are reduced in seed
// order so results do not depend on scheduling.

#include <cstdint>
#include <vector>

#include "fearsim/params.hpp"
#include "fearsim/simulation.hpp"
#include "fearsim/util.hpp"

namespace fearsim {

struct EnsembleResult {
    std::vector<std::uint64_t> seeds;
    std::vector<ReplicationOutput> replications; // in seed order
};

inline std::vector<std::uint64_t> seeds_from_base(std::uint64_t base, std::size_t count) {
    std::vector<std::uint64_t> seeds(count);
    for (std::size_t i = 0; i < count; ++i) seeds[i] = base + i;
    return seeds;
}

inline EnsembleResult run_ensemble(const ValidatedScenario& sc,
                                   const std::vector<std::uint64_t>& seeds, unsigned threads) {
    EnsembleResult result;
    result.seeds = seeds;
    result.replications.resize(seeds.size());
    parallel_for(seeds.size(), threads,
                 [&](std::size_t i) { result.replications[i] = run_replication(sc, seeds[i]); });
    return result;
}

// Per-day distribution summary of one exported series: mean, sample sd and
// the 16th/84th percentile band.
struct SeriesBand {
    std::vector<double> mean, sd, p16, p84;
};

template <typename Getter>
SeriesBand summarize_series(const std::vector<ReplicationOutput>& reps, Getter&& get) {
    SeriesBand band;
    if (reps.empty()) return band;
    const std::size_t days = reps.front().days.size();
    band.mean.resize(days);
    band.sd.resize(days);
    band.p16.resize(days);
    band.p84.resize(days);
    std::vector<double> values(reps.size());
    for (std::size_t t = 0; t < days; ++t) {
        for (std::size_t r = 0; r < reps.size(); ++r) values[r] = get(reps[r].days[t]);
        band.mean[t] = mean_of(values);
        band.sd[t] = sample_sd(values);
        band.p16[t] = percentile(values, 0.16);
        band.p84[t] = percentile(values, 0.84);
    }
    return band;
}

} // namespace fearsim
