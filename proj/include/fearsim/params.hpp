#pragma once

// Domain parameter types: the two diseases, the economy, the government's
// testing technology, optional age groups, and the scenario container that
// defines one simulated world. Validation collects every violated invariant
// with its field path instead of stopping at the first.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fearsim {

// How disease lags are generated. `poisson` is the full model (shifted
// Poisson incubation, Poisson symptom-to-outcome lags). `geometric_sir` is
// the restricted mode used to recover the textbook compartmental model:
// no incubation, no symptoms, no deaths, memoryless recovery with daily
// probability 1/q_tilde.
enum class LagModel { poisson, geometric_sir };

struct EpidemicDiseaseSpec {
    double beta = 0.0;   // transmission coefficient, per day
    double s = 0.0;      // probability of severe symptoms
    double m = 0.0;      // probability of mild symptoms
    double a = 0.0;      // probability of no symptoms
    double phi_s = 0.0;  // infection fatality risk conditional on severe
    double phi_m = 0.0;
    double phi_a = 0.0;
    std::int64_t p = 1;        // mean incubation days
    std::int64_t k_tilde = 0;  // mean days from symptoms to death
    std::int64_t q_tilde = 0;  // mean days from symptoms to recovery
    // Optional distinct recovery lag for mild/asymptomatic courses; when
    // absent every course uses q_tilde.
    std::optional<std::int64_t> q_tilde_nonsevere;
    LagModel lag_model = LagModel::poisson;
    std::int64_t c0_star = 0;  // initial infection count

    double unconditional_ifr() const { return s * phi_s + m * phi_m + a * phi_a; }
};

// Unconditional infection fatality risk implied by the joint distribution of
// symptom type and outcome.
inline double derive_unconditional_ifr(const EpidemicDiseaseSpec& spec) {
    return spec.unconditional_ifr();
}

struct ConfoundingDiseaseSpec {
    double omega_f = 0.0;  // share of the population infected over the horizon
    double sigma_f = 0.0;  // coefficient of variation of new daily infections
    double s_f = 0.0;      // probability of severe symptoms
    double phi_f = 0.0;    // infection fatality risk
    std::int64_t k_f = 1;  // fixed days from infection to death
    std::int64_t q_f = 1;  // fixed days from infection to recovery
};

struct EconomyParams {
    double n0 = 1.0;    // baseline labor supply
    double l0 = 1.0;    // baseline leisure
    double a = 0.0;     // daily productivity per unit of labor
    double eps_n = 0.0; // labor elasticity to perceived death risk
    double eps_l = 0.0; // leisure elasticity to perceived death risk
    double pi = 0.5;    // share of contacts due to work
};

struct GovernmentParams {
    double c_t = 0.0;     // cost per test
    double c_s = 0.0;     // daily cost of treating a severe case
    double tau = 0.0;     // tax rate on output
    std::int64_t d = 0;   // test result delay, days
    double alpha = 0.0;   // false negative rate
    double theta = 0.0;   // isolation effectiveness
    std::int64_t t_ns = 0; // daily testing capacity for non-severe individuals
    // Wider-policy variant: every eligible mild symptomatic individual is
    // tested daily regardless of capacity; t_ns then only screens the
    // symptomless pool.
    bool test_all_mild = false;
};

enum class GroupId { young, old };

inline const char* group_name(GroupId id) { return id == GroupId::young ? "young" : "old"; }

struct GroupSpec {
    GroupId id = GroupId::young;
    double share = 1.0;   // population share
    double a = 0.0;       // group productivity
    double phi_s = 0.0;   // group severe-case fatality risk
    std::int64_t c0 = 0;  // group initial infections
};

struct ContactMatrix {
    // rho0[g][g']: pre-epidemic share of group g's contacts spent with g'.
    std::array<std::array<double, 2>, 2> rho0{{{1.0, 0.0}, {0.0, 1.0}}};
};

enum class Beliefs { testing_data, exogenous_learning };
enum class InfoRelease { aggregate, disaggregated };

struct ScenarioConfig {
    std::int64_t p0 = 0;        // initial population
    std::int64_t t_horizon = 0; // days simulated
    EpidemicDiseaseSpec epidemic;
    ConfoundingDiseaseSpec confounding;
    EconomyParams economy;
    GovernmentParams government;
    std::optional<std::vector<GroupSpec>> groups; // exactly two when present
    std::optional<ContactMatrix> contact_matrix;  // required with groups
    Beliefs beliefs = Beliefs::testing_data;
    InfoRelease info_release = InfoRelease::aggregate;
    std::optional<double> perceived_beta; // agents' beta; defaults to the true one
    std::uint64_t seed = 1;
};

class ScenarioError : public std::runtime_error {
  public:
    explicit ScenarioError(std::vector<std::string> errors)
        : std::runtime_error(join(errors)), errors_(std::move(errors)) {}
    const std::vector<std::string>& errors() const { return errors_; }

  private:
    static std::string join(const std::vector<std::string>& errors) {
        std::string out = "invalid scenario:";
        for (const auto& e : errors) {
            out += "\n  - ";
            out += e;
        }
        return out;
    }
    std::vector<std::string> errors_;
};

// A validated scenario: the raw config plus derived quantities and the
// internal group list (a single full-share group in the homogeneous case).
struct ValidatedScenario {
    ScenarioConfig config;
    double phi = 0.0;                    // population unconditional IFR
    std::vector<double> group_phi;       // per internal group
    std::vector<GroupSpec> norm_groups;  // >= 1 entries
    ContactMatrix norm_contacts;
    std::vector<std::int64_t> group_pop; // initial population per group
    bool reducible_to_homogeneous = false;

    std::size_t group_count() const { return norm_groups.size(); }
    double perceived_beta() const {
        return config.perceived_beta ? *config.perceived_beta : config.epidemic.beta;
    }
};

namespace detail {

inline void check_prob(std::vector<std::string>& errs, double v, const std::string& path) {
    if (!(v >= 0.0 && v <= 1.0)) errs.push_back(path + ": must be in [0,1], got " + std::to_string(v));
}

inline void check_nonneg(std::vector<std::string>& errs, double v, const std::string& path) {
    if (!(v >= 0.0)) errs.push_back(path + ": must be >= 0, got " + std::to_string(v));
}

} // namespace detail

// Every violated invariant, reported with its field path. Empty means valid.
inline std::vector<std::string> validate_errors(const ScenarioConfig& c) {
    using detail::check_nonneg;
    using detail::check_prob;
    std::vector<std::string> errs;

    if (c.p0 < 1) errs.push_back("p0: must be >= 1");
    if (c.t_horizon < 1) errs.push_back("t_horizon: must be >= 1");

    const auto& e = c.epidemic;
    check_nonneg(errs, e.beta, "epidemic.beta");
    check_prob(errs, e.s, "epidemic.s");
    check_prob(errs, e.m, "epidemic.m");
    check_prob(errs, e.a, "epidemic.a");
    if (std::abs(e.s + e.m + e.a - 1.0) > 1e-12)
        errs.push_back("epidemic.s+m+a: symptom-type probabilities must sum to 1, got " +
                       std::to_string(e.s + e.m + e.a));
    check_prob(errs, e.phi_s, "epidemic.phi_s");
    check_prob(errs, e.phi_m, "epidemic.phi_m");
    check_prob(errs, e.phi_a, "epidemic.phi_a");
    if (e.k_tilde < 0) errs.push_back("epidemic.k_tilde: must be >= 0");
    if (e.q_tilde < 0) errs.push_back("epidemic.q_tilde: must be >= 0");
    if (e.q_tilde_nonsevere && *e.q_tilde_nonsevere < 0)
        errs.push_back("epidemic.q_tilde_nonsevere: must be >= 0");
    if (e.c0_star < 0) errs.push_back("epidemic.c0_star: must be >= 0");
    if (e.c0_star > c.p0) errs.push_back("epidemic.c0_star: must not exceed p0");
    if (e.lag_model == LagModel::poisson) {
        if (e.p < 1) errs.push_back("epidemic.p: mean incubation must be >= 1 day");
    } else {
        // Restricted compartmental mode: symptomless, deathless, memoryless.
        if (e.s != 0.0 || e.m != 0.0)
            errs.push_back("epidemic.lag_model: geometric-sir requires s = m = 0");
        if (e.phi_s != 0.0 || e.phi_m != 0.0 || e.phi_a != 0.0)
            errs.push_back("epidemic.lag_model: geometric-sir requires all fatality risks = 0");
        if (e.q_tilde < 1)
            errs.push_back("epidemic.q_tilde: geometric-sir requires mean recovery >= 1 day");
    }

    const auto& f = c.confounding;
    check_prob(errs, f.omega_f, "confounding.omega_f");
    check_nonneg(errs, f.sigma_f, "confounding.sigma_f");
    check_prob(errs, f.s_f, "confounding.s_f");
    check_prob(errs, f.phi_f, "confounding.phi_f");
    if (f.k_f < 1) errs.push_back("confounding.k_f: must be >= 1");
    if (f.q_f < 1) errs.push_back("confounding.q_f: must be >= 1");

    const auto& ec = c.economy;
    if (!(ec.n0 > 0.0)) errs.push_back("economy.n0: must be > 0");
    if (!(ec.l0 > 0.0)) errs.push_back("economy.l0: must be > 0");
    check_nonneg(errs, ec.a, "economy.a");
    check_nonneg(errs, ec.eps_n, "economy.eps_n");
    check_nonneg(errs, ec.eps_l, "economy.eps_l");
    check_prob(errs, ec.pi, "economy.pi");

    const auto& g = c.government;
    check_nonneg(errs, g.c_t, "government.c_t");
    check_nonneg(errs, g.c_s, "government.c_s");
    check_prob(errs, g.tau, "government.tau");
    check_prob(errs, g.alpha, "government.alpha");
    check_prob(errs, g.theta, "government.theta");
    if (g.d < 0) errs.push_back("government.d: must be >= 0");
    if (g.t_ns < 0) errs.push_back("government.t_ns: must be >= 0");

    if (c.perceived_beta) check_nonneg(errs, *c.perceived_beta, "perceived_beta");

    if (c.groups.has_value()) {
        const auto& gs = *c.groups;
        if (gs.size() != 2) {
            errs.push_back("groups: exactly 2 groups required when present");
        } else {
            if (gs[0].id == gs[1].id) errs.push_back("groups: ids must be distinct");
            double share_sum = 0.0;
            std::int64_t c0_sum = 0;
            for (std::size_t i = 0; i < gs.size(); ++i) {
                const std::string path = "groups[" + std::to_string(i) + "]";
                check_prob(errs, gs[i].share, path + ".share");
                check_nonneg(errs, gs[i].a, path + ".a");
                check_prob(errs, gs[i].phi_s, path + ".phi_s");
                if (gs[i].c0 < 0) errs.push_back(path + ".c0: must be >= 0");
                share_sum += gs[i].share;
                c0_sum += gs[i].c0;
            }
            if (std::abs(share_sum - 1.0) > 1e-12)
                errs.push_back("groups: shares must sum to 1, got " + std::to_string(share_sum));
            if (c0_sum != c.epidemic.c0_star)
                errs.push_back("groups: sum of group c0 (" + std::to_string(c0_sum) +
                               ") must equal epidemic.c0_star (" + std::to_string(c.epidemic.c0_star) +
                               ")");
        }
        if (!c.contact_matrix.has_value())
            errs.push_back("contact_matrix: required when groups are present");
    } else if (c.contact_matrix.has_value()) {
        errs.push_back("contact_matrix: only allowed when groups are present");
    }

    if (c.contact_matrix.has_value()) {
        const auto& m = c.contact_matrix->rho0;
        for (int r = 0; r < 2; ++r) {
            double row = 0.0;
            for (int col = 0; col < 2; ++col) {
                if (!(m[r][col] >= 0.0))
                    errs.push_back("contact_matrix[" + std::to_string(r) + "][" +
                                   std::to_string(col) + "]: must be >= 0");
                row += m[r][col];
            }
            if (std::abs(row - 1.0) > 1e-12)
                errs.push_back("contact_matrix[" + std::to_string(r) +
                               "]: row must sum to 1, got " + std::to_string(row));
        }
    }

    if (c.beliefs == Beliefs::exogenous_learning && c.info_release == InfoRelease::disaggregated)
        errs.push_back("beliefs: exogenous-learning is defined on aggregate data only");

    return errs;
}

// Normalizes a scenario or throws ScenarioError listing every violation.
inline ValidatedScenario validate(const ScenarioConfig& c) {
    auto errs = validate_errors(c);
    if (!errs.empty()) throw ScenarioError(std::move(errs));

    ValidatedScenario v;
    v.config = c;
    if (c.groups.has_value()) {
        v.norm_groups = *c.groups;
        // Young first, fixed internal order.
        if (v.norm_groups[0].id == GroupId::old) std::swap(v.norm_groups[0], v.norm_groups[1]);
        v.norm_contacts = *c.contact_matrix;
        if (c.groups->at(0).id == GroupId::old) {
            // Contact matrix rows/cols follow the declared group order; swap to match.
            auto& m = v.norm_contacts.rho0;
            std::swap(m[0], m[1]);
            std::swap(m[0][0], m[0][1]);
            std::swap(m[1][0], m[1][1]);
        }
    } else {
        GroupSpec g;
        g.id = GroupId::young;
        g.share = 1.0;
        g.a = c.economy.a;
        g.phi_s = c.epidemic.phi_s;
        g.c0 = c.epidemic.c0_star;
        v.norm_groups = {g};
        v.norm_contacts.rho0 = {{{1.0, 0.0}, {0.0, 1.0}}};
    }

    v.group_pop.resize(v.norm_groups.size());
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i + 1 < v.norm_groups.size(); ++i) {
        v.group_pop[i] = std::llround(v.norm_groups[i].share * static_cast<double>(c.p0));
        assigned += v.group_pop[i];
    }
    v.group_pop.back() = c.p0 - assigned;
    for (std::size_t i = 0; i < v.norm_groups.size(); ++i) {
        if (v.norm_groups[i].c0 > v.group_pop[i])
            throw ScenarioError({"groups[" + std::to_string(i) +
                                 "].c0: exceeds the group's initial population"});
    }

    v.group_phi.resize(v.norm_groups.size());
    v.phi = 0.0;
    for (std::size_t i = 0; i < v.norm_groups.size(); ++i) {
        v.group_phi[i] = c.epidemic.s * v.norm_groups[i].phi_s + c.epidemic.m * c.epidemic.phi_m +
                         c.epidemic.a * c.epidemic.phi_a;
        v.phi += v.norm_groups[i].share * v.group_phi[i];
    }

    if (v.norm_groups.size() == 2) {
        const auto& g0 = v.norm_groups[0];
        const auto& g1 = v.norm_groups[1];
        const auto& m = v.norm_contacts.rho0;
        const bool same_params = g0.a == g1.a && g0.phi_s == g1.phi_s;
        const bool proportional_rows =
            std::abs(m[0][0] - g0.share) < 1e-12 && std::abs(m[0][1] - g1.share) < 1e-12 &&
            std::abs(m[1][0] - g0.share) < 1e-12 && std::abs(m[1][1] - g1.share) < 1e-12;
        v.reducible_to_homogeneous = same_params && proportional_rows;
    }

    return v;
}

} // namespace fearsim
