#pragma once

// The health-care system's symptoms-prioritized testing policy as set
// operations. Severe symptomatic individuals are always tested; a mandated
// daily capacity flows to mild symptomatic individuals first and then to the
// symptomless pool. Results return after a fixed delay, tests miss active
// infections at the false-negative rate, and only the epidemic disease can
// test positive. Positive cases enter the detected list, are isolated while
// infectious, and are never retested; negatives become eligible again the
// day after their result returns.

#include <cstdint>
#include <vector>

#include "fearsim/params.hpp"
#include "fearsim/population.hpp"
#include "fearsim/random.hpp"

namespace fearsim {

struct AdministeredTest {
    std::int32_t id;
    bool positive; // decided at administration: active infection and not a false negative
};

struct DailyTestStats {
    std::int64_t tests = 0;
    std::int64_t tests_severe = 0;
    std::int64_t tests_mild = 0;
    std::int64_t tests_asymp = 0;
    std::int64_t positives = 0; // attributed to the administration day
};

// The detection ledger: pending test results awaiting their report day plus
// the cumulative reported series (the per-individual flags and the detected
// counters live on the population records).
class DetectionLedger {
  public:
    void init(std::int32_t horizon, std::int64_t delay) {
        delay_ = delay;
        resolve_at_.assign(static_cast<std::size_t>(horizon) + 2, {});
    }

    std::int64_t delay() const { return delay_; }

    // Step 2 of the daily loop: results administered at t - d return today.
    // Positives join the detected list (isolation starts now); negatives
    // become retestable from tomorrow.
    void resolve_due(PopulationState& pop, std::int32_t t) {
        const auto slot = static_cast<std::size_t>(t);
        if (slot >= resolve_at_.size()) return;
        for (const AdministeredTest& test : resolve_at_[slot]) {
            if (test.positive) {
                pop.mark_detected(test.id, t);
            } else {
                pop.requeue_for_testing(test.id, t + 1);
            }
        }
        resolve_at_[slot].clear();
    }

    // Step 6: select today's tests and administer them. Returns the day's
    // testing statistics. With a zero result delay, outcomes resolve
    // immediately (behavior still reacts from tomorrow, when perceptions are
    // next computed).
    DailyTestStats administer_tests(PopulationState& pop, const GovernmentParams& gov,
                                    std::uint64_t seed, std::int32_t t) {
        DailyTestStats stats;
        auto select_rng = make_stream(seed, Stream::test_selection, static_cast<std::uint64_t>(t));
        auto outcome_rng = make_stream(seed, Stream::test_outcome, static_cast<std::uint64_t>(t));

        // Severe symptomatic individuals, minus already-detected and pending.
        // Capacity for them is unbounded.
        severe_buf_.clear();
        for (const std::int32_t id : pop.severe_display.items()) {
            const Individual& ind = pop.people[static_cast<std::size_t>(id)];
            if (!ind.detected && !ind.is_pending(t)) severe_buf_.push_back(id);
        }
        for (const std::int32_t id : severe_buf_) {
            administer(pop, gov, outcome_rng, t, id);
            stats.tests_severe++;
        }

        std::int64_t capacity = gov.t_ns;
        if (capacity > 0 || gov.test_all_mild) {
            // Mild symptomatic individuals next: a uniform random subset of
            // the eligible set, as large as capacity allows. Under the
            // wider-policy variant every eligible mild case is tested and the
            // mandated capacity is reserved for the symptomless pool.
            mild_buf_.clear();
            for (const std::int32_t id : pop.mild_display.items()) {
                const Individual& ind = pop.people[static_cast<std::size_t>(id)];
                if (!ind.detected && !ind.is_pending(t)) mild_buf_.push_back(id);
            }
            const auto take_mild =
                gov.test_all_mild
                    ? static_cast<std::int64_t>(mild_buf_.size())
                    : std::min<std::int64_t>(capacity, static_cast<std::int64_t>(mild_buf_.size()));
            for (std::int64_t i = 0; i < take_mild; ++i) {
                const std::uint64_t j =
                    i + uniform_below(select_rng,
                                      static_cast<std::uint64_t>(mild_buf_.size()) - i);
                std::swap(mild_buf_[static_cast<std::size_t>(i)], mild_buf_[j]);
                administer(pop, gov, outcome_rng, t, mild_buf_[static_cast<std::size_t>(i)]);
                stats.tests_mild++;
            }
            if (!gov.test_all_mild) capacity -= take_mild;
        }
        if (capacity > 0) {
            // Remaining capacity screens the symptomless pool: healthy,
            // incubating, and asymptomatic-infected individuals alike.
            // Administering removes the pick from the pool, so repeated
            // uniform picks give a uniform subset.
            const auto take_asymp = std::min<std::int64_t>(capacity, pop.asymp_eligible.size());
            for (std::int64_t i = 0; i < take_asymp; ++i) {
                const std::int32_t id = pop.asymp_eligible.sample(select_rng);
                administer(pop, gov, outcome_rng, t, id);
                stats.tests_asymp++;
            }
        }

        stats.tests = stats.tests_severe + stats.tests_mild + stats.tests_asymp;
        stats.positives = positives_today_;
        positives_today_ = 0;

        if (gov.d == 0) resolve_due(pop, t);
        return stats;
    }

  private:
    void administer(PopulationState& pop, const GovernmentParams& gov, RngStream& outcome_rng,
                    std::int32_t t, std::int32_t id) {
        Individual& ind = pop.people[static_cast<std::size_t>(id)];
        assert(ind.alive && !ind.detected && !ind.is_pending(t));
        // Only an active epidemic infection can return a positive, and it is
        // missed with the false-negative probability.
        const bool positive = ind.epi_active(t) && bernoulli(outcome_rng, 1.0 - gov.alpha);
        ind.pending_until = static_cast<std::int32_t>(t + gov.d);
        pop.asymp_eligible.remove(id);
        const auto due = static_cast<std::size_t>(t + gov.d);
        if (due < resolve_at_.size()) resolve_at_[due].push_back({id, positive});
        if (positive) ++positives_today_;
    }

    std::vector<std::vector<AdministeredTest>> resolve_at_;
    std::vector<std::int32_t> severe_buf_;
    std::vector<std::int32_t> mild_buf_;
    std::int64_t positives_today_ = 0;
    std::int64_t delay_ = 0;
};

} // namespace fearsim
