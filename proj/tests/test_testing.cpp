#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>

#include "fearsim/population.hpp"
#include "fearsim/presets.hpp"
#include "fearsim/simulation.hpp"
#include "fearsim/testing.hpp"

using namespace fearsim;

namespace {

// A 20-agent world with deterministic symptom display: the epidemic disease
// always turns severe after exactly one incubation day, the confounding
// disease is always severe immediately, and nobody dies or recovers quickly.
ValidatedScenario hand_built_scenario() {
    auto cfg = preset_baseline();
    cfg.p0 = 20;
    cfg.t_horizon = 50;
    cfg.epidemic.c0_star = 0;
    cfg.epidemic.s = 1.0;
    cfg.epidemic.m = 0.0;
    cfg.epidemic.a = 0.0;
    cfg.epidemic.phi_s = 0.0;
    cfg.epidemic.p = 1;       // incubation is exactly one day
    cfg.epidemic.q_tilde = 40;
    cfg.confounding.omega_f = 0.0;
    cfg.confounding.s_f = 1.0;
    cfg.confounding.phi_f = 0.0;
    cfg.confounding.q_f = 40;
    return validate(cfg);
}

// Infections are committed for day 1 and take effect when day 1 is advanced;
// epidemic symptom onsets then fire on day 2.
void seed_infections(PopulationState& pop, const ValidatedScenario& sc, std::uint64_t seed,
                     std::int32_t epi_count, std::int32_t conf_count) {
    for (std::int32_t id = 0; id < epi_count; ++id) pop.infect_epidemic(sc, seed, id, 1);
    for (std::int32_t id = epi_count; id < epi_count + conf_count; ++id)
        pop.infect_confounding(sc, seed, id, 1);
    pop.advance_day(1);
    pop.advance_day(2);
}

} // namespace

// Set enumeration on a hand-built population: 10 severe individuals (6
// epidemic, 4 confounding), 2 with pending results -> 8 tested, regardless of
// which disease causes the symptoms.
TEST(Testing, SevereSelectionSetDifference) {
    const auto sc = hand_built_scenario();
    PopulationState pop;
    pop.init(sc, 5);
    seed_infections(pop, sc, 5, 6, 4);
    ASSERT_EQ(pop.severe_display.size(), 10);
    pop.people[2].pending_until = 2; // results still pending at t = 2
    pop.people[7].pending_until = 2;

    DetectionLedger ledger;
    ledger.init(50, sc.config.government.d);
    const auto stats = ledger.administer_tests(pop, sc.config.government, 5, 2);
    EXPECT_EQ(stats.tests_severe, 8);
    EXPECT_EQ(stats.tests_mild, 0);
    EXPECT_EQ(stats.tests_asymp, 0);
}

TEST(Testing, NoSevereNoTests) {
    const auto sc = hand_built_scenario();
    PopulationState pop;
    pop.init(sc, 6);
    DetectionLedger ledger;
    ledger.init(50, sc.config.government.d);
    const auto stats = ledger.administer_tests(pop, sc.config.government, 6, 0);
    EXPECT_EQ(stats.tests, 0);
}

TEST(Testing, DetectedAreExcludedFromSelection) {
    const auto sc = hand_built_scenario();
    PopulationState pop;
    pop.init(sc, 7);
    seed_infections(pop, sc, 7, 1, 0);
    ASSERT_TRUE(pop.people[0].displays_severe(2));
    pop.mark_detected(0, 2);
    DetectionLedger ledger;
    ledger.init(50, sc.config.government.d);
    const auto stats = ledger.administer_tests(pop, sc.config.government, 7, 2);
    EXPECT_EQ(stats.tests, 0);
}

// Waterfall: capacity 5 with 3 eligible mild cases tests all 3 mild plus 2
// random members of the symptomless pool.
TEST(Testing, MildThenAsymptomaticWaterfall) {
    auto cfg = hand_built_scenario().config;
    cfg.epidemic.s = 0.0;
    cfg.epidemic.m = 1.0; // all epidemic courses are mild
    cfg.government.t_ns = 5;
    const auto sc = validate(cfg);
    PopulationState pop;
    pop.init(sc, 8);
    seed_infections(pop, sc, 8, 3, 0);
    ASSERT_EQ(pop.mild_display.size(), 3);
    DetectionLedger ledger;
    ledger.init(50, sc.config.government.d);
    const auto stats = ledger.administer_tests(pop, sc.config.government, 8, 2);
    EXPECT_EQ(stats.tests_mild, 3);
    EXPECT_EQ(stats.tests_asymp, 2);
    EXPECT_EQ(stats.tests, 5);
}

// Wider policy: every eligible mild case is tested regardless of capacity,
// and the mandated capacity all flows to the symptomless pool.
TEST(Testing, TestAllMildBypassesCapacity) {
    auto cfg = hand_built_scenario().config;
    cfg.epidemic.s = 0.0;
    cfg.epidemic.m = 1.0;
    cfg.government.t_ns = 2;
    cfg.government.test_all_mild = true;
    const auto sc = validate(cfg);
    PopulationState pop;
    pop.init(sc, 18);
    seed_infections(pop, sc, 18, 7, 0);
    ASSERT_EQ(pop.mild_display.size(), 7);
    DetectionLedger ledger;
    ledger.init(50, sc.config.government.d);
    const auto stats = ledger.administer_tests(pop, sc.config.government, 18, 2);
    EXPECT_EQ(stats.tests_mild, 7);
    EXPECT_EQ(stats.tests_asymp, 2);

    // and with zero capacity the mild tests still happen
    cfg.government.t_ns = 0;
    const auto sc0 = validate(cfg);
    PopulationState pop0;
    pop0.init(sc0, 18);
    seed_infections(pop0, sc0, 18, 7, 0);
    DetectionLedger ledger0;
    ledger0.init(50, 0);
    const auto stats0 = ledger0.administer_tests(pop0, sc0.config.government, 18, 2);
    EXPECT_EQ(stats0.tests_mild, 7);
    EXPECT_EQ(stats0.tests_asymp, 0);
}

// Widening the policy from severe-only to severe-plus-mild lowers both the
// case fatality rate (less lethal cases enter the count) and the test
// positivity rate (the mild pool is diluted by the confounding disease).
TEST(Testing, WiderPolicyLowersCfrAndPositivity) {
    auto narrow_cfg = preset_baseline();
    narrow_cfg.p0 = 10000;
    narrow_cfg.t_horizon = 250;
    auto wide_cfg = narrow_cfg;
    wide_cfg.government.test_all_mild = true;
    const auto narrow = validate(narrow_cfg);
    const auto wide = validate(wide_cfg);
    double cfr_narrow = 0, cfr_wide = 0, pos_narrow = 0, pos_wide = 0;
    const int seeds = 10;
    for (int seed = 1; seed <= seeds; ++seed) {
        const auto n = run_replication(narrow, seed);
        const auto w = run_replication(wide, seed);
        cfr_narrow += n.days.back().cfr;
        cfr_wide += w.days.back().cfr;
        double pn = 0, pw = 0;
        std::int64_t tn = 0, tw = 0;
        for (const auto& row : n.days) {
            pn += static_cast<double>(row.positives);
            tn += row.tests;
        }
        for (const auto& row : w.days) {
            pw += static_cast<double>(row.positives);
            tw += row.tests;
        }
        pos_narrow += pn / static_cast<double>(tn);
        pos_wide += pw / static_cast<double>(tw);
    }
    EXPECT_LT(cfr_wide / seeds, 0.6 * cfr_narrow / seeds);
    EXPECT_LT(pos_wide / seeds, pos_narrow / seeds);
}

TEST(Testing, ZeroCapacityMeansNoNonSevereTests) {
    const auto sc = hand_built_scenario(); // t_ns = 0
    PopulationState pop;
    pop.init(sc, 9);
    seed_infections(pop, sc, 9, 0, 3);
    DetectionLedger ledger;
    ledger.init(50, sc.config.government.d);
    const auto stats = ledger.administer_tests(pop, sc.config.government, 9, 2);
    EXPECT_EQ(stats.tests_severe, 3);
    EXPECT_EQ(stats.tests_mild, 0);
    EXPECT_EQ(stats.tests_asymp, 0);
}

// Capacity beyond the eligible pools tests everyone once.
TEST(Testing, CapacitySlackTestsEveryoneEligible) {
    auto cfg = preset_baseline();
    cfg.p0 = 30;
    cfg.t_horizon = 20;
    cfg.epidemic.c0_star = 0;
    cfg.confounding.omega_f = 0.0;
    cfg.government.t_ns = 1000;
    const auto sc = validate(cfg);
    PopulationState pop;
    pop.init(sc, 10);
    DetectionLedger ledger;
    ledger.init(20, sc.config.government.d);
    const auto stats = ledger.administer_tests(pop, sc.config.government, 10, 0);
    EXPECT_EQ(stats.tests, 30); // whole healthy population screened once
}

// 3-sigma binomial bound on the false-negative channel: 1e4 active infections
// tested at alpha = 0.25 -> positives within 7500 +- 130.
TEST(Testing, FalseNegativeRate) {
    auto cfg = preset_baseline();
    cfg.p0 = 10000;
    cfg.t_horizon = 20;
    cfg.epidemic.c0_star = 10000; // everyone starts infected (incubating)
    cfg.confounding.omega_f = 0.0;
    cfg.government.t_ns = 10000;
    const auto sc = validate(cfg);
    PopulationState pop;
    pop.init(sc, 11);
    DetectionLedger ledger;
    ledger.init(20, sc.config.government.d);
    const auto stats = ledger.administer_tests(pop, sc.config.government, 11, 0);
    ASSERT_EQ(stats.tests, 10000);
    EXPECT_NEAR(static_cast<double>(stats.positives), 7500.0, 130.0);
}

TEST(Testing, AlphaZeroDetectsEveryTestedInfection) {
    auto cfg = preset_baseline();
    cfg.p0 = 200;
    cfg.t_horizon = 20;
    cfg.epidemic.c0_star = 200;
    cfg.confounding.omega_f = 0.0;
    cfg.government.alpha = 0.0;
    cfg.government.t_ns = 200;
    const auto sc = validate(cfg);
    PopulationState pop;
    pop.init(sc, 12);
    DetectionLedger ledger;
    ledger.init(20, sc.config.government.d);
    const auto stats = ledger.administer_tests(pop, sc.config.government, 12, 0);
    EXPECT_EQ(stats.positives, 200);
}

// Confounding infections always test negative: the test detects only the
// epidemic disease.
TEST(Testing, ConfoundingSevereAlwaysNegative) {
    const auto sc = hand_built_scenario();
    PopulationState pop;
    pop.init(sc, 13);
    seed_infections(pop, sc, 13, 0, 10);
    DetectionLedger ledger;
    ledger.init(50, sc.config.government.d);
    const auto stats = ledger.administer_tests(pop, sc.config.government, 13, 2);
    EXPECT_EQ(stats.tests_severe, 10);
    EXPECT_EQ(stats.positives, 0);
    // results return at t + d; still nobody is detected
    pop.advance_day(3);
    ledger.resolve_due(pop, 3);
    EXPECT_EQ(pop.counts[0].detected_cases, 0);
}

// Retest after a negative: with alpha = 1 every result is negative, so one
// persistent severe case is tested at onset and again every d + 1 days.
TEST(Testing, RetestAfterNegativeCadence) {
    auto cfg = hand_built_scenario().config;
    cfg.government.alpha = 1.0;
    cfg.government.d = 1;
    const auto sc = validate(cfg);
    PopulationState pop;
    pop.init(sc, 14);
    pop.infect_epidemic(sc, 14, 0, 1); // severe from day 2, recovery far away
    pop.advance_day(1);
    DetectionLedger ledger;
    ledger.init(50, 1);
    std::vector<std::int64_t> tested_on;
    for (std::int32_t t = 2; t <= 9; ++t) {
        pop.advance_day(t);
        ledger.resolve_due(pop, t);
        const auto stats = ledger.administer_tests(pop, sc.config.government, 14, t);
        tested_on.push_back(stats.tests_severe);
    }
    // days:            2  3  4  5  6  7  8  9
    EXPECT_EQ(tested_on, (std::vector<std::int64_t>{1, 0, 1, 0, 1, 0, 1, 0}));
    EXPECT_EQ(pop.counts[0].detected_cases, 0);
}

// Delay rule: a positive administered at t enters the detected list at t + d,
// and isolation starts the day the result returns.
TEST(Testing, DetectionDelayAndIsolationStart) {
    auto cfg = hand_built_scenario().config;
    cfg.government.alpha = 0.0;
    cfg.government.d = 1;
    const auto sc = validate(cfg);
    PopulationState pop;
    pop.init(sc, 15);
    seed_infections(pop, sc, 15, 1, 0);
    DetectionLedger ledger;
    ledger.init(50, 1);
    const auto stats = ledger.administer_tests(pop, sc.config.government, 15, 2);
    ASSERT_EQ(stats.tests_severe, 1);
    EXPECT_EQ(pop.counts[0].detected_cases, 0); // not yet known
    EXPECT_FALSE(pop.people[0].isolated);
    pop.advance_day(3);
    ledger.resolve_due(pop, 3);
    EXPECT_EQ(pop.counts[0].detected_cases, 1);
    EXPECT_TRUE(pop.people[0].isolated);
    EXPECT_EQ(pop.counts[0].detected_active, 1);
    EXPECT_EQ(pop.counts[0].detected_active_severe, 1);
}

TEST(Testing, ZeroDelayResolvesSameDay) {
    auto cfg = hand_built_scenario().config;
    cfg.government.alpha = 0.0;
    cfg.government.d = 0;
    const auto sc = validate(cfg);
    PopulationState pop;
    pop.init(sc, 16);
    seed_infections(pop, sc, 16, 1, 0);
    DetectionLedger ledger;
    ledger.init(50, 0);
    ledger.administer_tests(pop, sc.config.government, 16, 2);
    EXPECT_TRUE(pop.people[0].detected);
    EXPECT_EQ(pop.people[0].detected_day, 2);
}

// Under severe-only testing with a precise test, every severe epidemic case
// whose symptomatic window spans at least d + 1 days is detected before its
// terminal outcome.
TEST(Testing, SevereOnlyEventualDetection) {
    auto cfg = preset_baseline();
    cfg.p0 = 4000;
    cfg.t_horizon = 250;
    cfg.epidemic.c0_star = 20;
    cfg.government.alpha = 0.0;
    cfg.government.t_ns = 0;
    const auto sc = validate(cfg);
    Simulation sim(sc, 31);
    sim.run();
    int checked = 0;
    for (const auto& ind : sim.population().people) {
        if (!ind.epi_ever() || ind.epi_symptoms != SymptomType::severe) continue;
        if (ind.epi_terminal_day > 250) continue; // window truncated by the horizon
        const std::int32_t window = ind.epi_terminal_day - ind.epi_onset_day;
        if (window >= sc.config.government.d + 1) {
            EXPECT_TRUE(ind.detected) << "severe case with window " << window;
            if (ind.detected) {
                EXPECT_LT(ind.detected_day, ind.epi_terminal_day);
            }
            checked++;
        }
    }
    EXPECT_GT(checked, 100);
}

// Ledger coherence over a full run with screening: detected implies epidemic
// infection (no false positives), and isolation tracks detected-and-active
// exactly.
TEST(Testing, LedgerCoherenceAfterFullRun) {
    auto cfg = preset_baseline();
    cfg.p0 = 3000;
    cfg.t_horizon = 200;
    cfg.epidemic.c0_star = 15;
    cfg.government.t_ns = 50;
    const auto sc = validate(cfg);
    Simulation sim(sc, 77);
    const auto out = sim.run();
    const auto& pop = sim.population();
    std::int64_t detected = 0;
    for (const auto& ind : pop.people) {
        if (ind.detected) {
            detected++;
            EXPECT_TRUE(ind.epi_ever()); // subset chain: C is epidemic-only
            EXPECT_EQ(ind.isolated, ind.alive && ind.epi_active(200));
        } else {
            EXPECT_FALSE(ind.isolated);
        }
    }
    EXPECT_EQ(detected, out.days.back().detected_cases);
    EXPECT_LE(out.days.back().detected_cases, out.days.back().latent_cases);
}
