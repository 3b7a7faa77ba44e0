#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "fearsim/ensemble.hpp"
#include "fearsim/presets.hpp"
#include "fearsim/simulation.hpp"

using namespace fearsim;

namespace {

ValidatedScenario small_sars(std::int64_t p0 = 10000, std::int64_t horizon = 250) {
    auto cfg = preset_sars_cov_2();
    cfg.p0 = p0;
    cfg.t_horizon = horizon;
    cfg.epidemic.c0_star = 50;
    (*cfg.groups)[0].c0 = 42;
    (*cfg.groups)[1].c0 = 8;
    return validate(cfg);
}

} // namespace

// Group series sum to the aggregate series every day.
TEST(Groups, AggregationConsistency) {
    const auto out = run_replication(small_sars(), 17);
    for (const auto& row : out.days) {
        ASSERT_EQ(row.groups.size(), 2u);
        EXPECT_EQ(row.groups[0].alive + row.groups[1].alive, row.alive);
        EXPECT_EQ(row.groups[0].latent_cases + row.groups[1].latent_cases, row.latent_cases);
        EXPECT_EQ(row.groups[0].latent_active + row.groups[1].latent_active, row.latent_active);
        EXPECT_EQ(row.groups[0].latent_deaths + row.groups[1].latent_deaths, row.latent_deaths);
        EXPECT_EQ(row.groups[0].detected_cases + row.groups[1].detected_cases,
                  row.detected_cases);
        EXPECT_EQ(row.groups[0].reported_deaths + row.groups[1].reported_deaths,
                  row.reported_deaths);
        EXPECT_NEAR(row.groups[0].gdp + row.groups[1].gdp, row.fiscal.gdp,
                    1e-9 * (1.0 + row.fiscal.gdp));
    }
}

// Aggregate information: both groups carry the identical perceived risk.
TEST(Groups, AggregateInfoChiIdentity) {
    auto cfg = small_sars().config;
    cfg.info_release = InfoRelease::aggregate;
    const auto out = run_replication(validate(cfg), 19);
    for (const auto& row : out.days) {
        ASSERT_DOUBLE_EQ(row.groups[0].chi, row.groups[1].chi);
        ASSERT_DOUBLE_EQ(row.groups[0].chi, row.chi);
    }
}

// Disaggregated information: once deaths accrue, the old group's case
// fatality rate (and so its perceived risk) exceeds the young group's.
TEST(Groups, DisaggregatedOldFearExceedsYoung) {
    auto cfg = small_sars().config;
    cfg.info_release = InfoRelease::disaggregated;
    int checked_days = 0;
    for (int seed = 1; seed <= 5; ++seed) {
        const auto out = run_replication(validate(cfg), seed);
        bool old_death_seen = false;
        for (const auto& row : out.days) {
            if (row.groups[1].reported_deaths > 0) old_death_seen = true;
            if (old_death_seen && row.detected_active > 0) {
                EXPECT_GE(row.groups[1].chi, row.groups[0].chi) << "day " << row.day;
                ++checked_days;
            }
        }
        EXPECT_TRUE(old_death_seen) << "seed " << seed;
    }
    EXPECT_GT(checked_days, 100);
}

// Before any detected death the division guard keeps group CFRs at zero.
TEST(Groups, DivisionGuardZeroCfr) {
    auto cfg = small_sars().config;
    cfg.info_release = InfoRelease::disaggregated;
    const auto out = run_replication(validate(cfg), 23);
    for (const auto& row : out.days) {
        if (row.groups[1].reported_deaths == 0) {
            EXPECT_DOUBLE_EQ(row.groups[1].cfr, 0.0);
        }
        if (row.groups[0].reported_deaths == 0) {
            EXPECT_DOUBLE_EQ(row.groups[0].cfr, 0.0);
        }
    }
}

// Contact matrix endogenization: the within-group entry scales with the
// group's own activity, the cross entries with population activity.
TEST(Groups, ContactMatrixScalingInSitu) {
    auto cfg = small_sars().config;
    cfg.info_release = InfoRelease::disaggregated;
    const auto sc = validate(cfg);
    const auto out = run_replication(sc, 29);
    const auto& rho0 = sc.norm_contacts.rho0;
    for (const auto& row : out.days) {
        const double act_y =
            0.5 * row.groups[0].avg_labor + 0.5 * row.groups[0].avg_leisure;
        const double act_o =
            0.5 * row.groups[1].avg_labor + 0.5 * row.groups[1].avg_leisure;
        ASSERT_NEAR(row.rho[0][0], rho0[0][0] * act_y, 1e-12);
        ASSERT_NEAR(row.rho[1][1], rho0[1][1] * act_o, 1e-12);
        ASSERT_NEAR(row.rho[0][1], rho0[0][1] * row.contact, 1e-12);
        ASSERT_NEAR(row.rho[1][0], rho0[1][0] * row.contact, 1e-12);
        // endogenized entries stay within [0, baseline]
        for (int g = 0; g < 2; ++g)
            for (int h = 0; h < 2; ++h) {
                ASSERT_GE(row.rho[g][h], 0.0);
                ASSERT_LE(row.rho[g][h], rho0[g][h] + 1e-12);
            }
    }
    // day 0: matrix equals the pre-epidemic baseline
    EXPECT_NEAR(out.days[0].rho[0][0], rho0[0][0], 1e-12);
    EXPECT_NEAR(out.days[0].rho[1][0], rho0[1][0], 1e-12);
}

// Identical groups at baseline activity: per-group GDP is proportional to
// share times productivity.
TEST(Groups, GdpSharesAtBaseline) {
    const auto sc = small_sars();
    const auto out = run_replication(sc, 31);
    const auto& day0 = out.days[0];
    const double young_share = day0.groups[0].gdp / day0.fiscal.gdp;
    EXPECT_NEAR(young_share, (0.835 * 230.0) / (0.835 * 230.0 + 0.165 * 46.0), 1e-6);
}

// Statistical nesting: an equal-share two-group configuration with identical
// parameters and uniform mixing reproduces the homogeneous model's
// distribution of cumulative deaths (two-sample KS test at 5%).
TEST(Groups, NestingMatchesHomogeneousDistribution) {
    auto homo = preset_baseline();
    homo.p0 = 4000;
    homo.t_horizon = 200;
    homo.epidemic.c0_star = 20;

    auto grouped = homo;
    GroupSpec young{GroupId::young, 0.5, homo.economy.a, homo.epidemic.phi_s, 10};
    GroupSpec old{GroupId::old, 0.5, homo.economy.a, homo.epidemic.phi_s, 10};
    grouped.groups = std::vector<GroupSpec>{young, old};
    ContactMatrix m;
    m.rho0 = {{{0.5, 0.5}, {0.5, 0.5}}};
    grouped.contact_matrix = m;

    const int n = 30;
    std::vector<double> homo_deaths, grouped_deaths;
    const auto homo_sc = validate(homo);
    const auto grouped_sc = validate(grouped);
    EXPECT_TRUE(grouped_sc.reducible_to_homogeneous);
    for (int seed = 1; seed <= n; ++seed) {
        homo_deaths.push_back(
            static_cast<double>(run_replication(homo_sc, seed).total_epi_deaths));
        grouped_deaths.push_back(
            static_cast<double>(run_replication(grouped_sc, seed + 1000).total_epi_deaths));
    }
    std::sort(homo_deaths.begin(), homo_deaths.end());
    std::sort(grouped_deaths.begin(), grouped_deaths.end());
    // two-sample KS statistic
    double ks = 0.0;
    std::size_t i = 0, j = 0;
    while (i < homo_deaths.size() && j < grouped_deaths.size()) {
        if (homo_deaths[i] <= grouped_deaths[j])
            ++i;
        else
            ++j;
        ks = std::max(ks, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / n));
    }
    // 5% critical value for n = m = 30: 1.358 * sqrt(2/30)
    EXPECT_LT(ks, 1.358 * std::sqrt(2.0 / n));
}

// The confounding disease splits across groups roughly by population share.
TEST(Groups, ConfoundingSplitsByShare) {
    auto cfg = small_sars().config;
    cfg.epidemic.c0_star = 0;
    (*cfg.groups)[0].c0 = 0;
    (*cfg.groups)[1].c0 = 0;
    const auto sc = validate(cfg);
    std::int64_t young_conf = 0, total_conf = 0;
    for (int seed = 1; seed <= 10; ++seed) {
        Simulation sim(sc, seed);
        sim.run();
        for (const auto& ind : sim.population().people)
            if (ind.conf_ever()) {
                ++total_conf;
                if (ind.group == 0) ++young_conf;
            }
    }
    const double share = static_cast<double>(young_conf) / static_cast<double>(total_conf);
    const double sd = std::sqrt(0.835 * 0.165 / static_cast<double>(total_conf));
    EXPECT_NEAR(share, 0.835, 4.0 * sd);
}
