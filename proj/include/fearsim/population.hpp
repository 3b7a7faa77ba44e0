#pragma once

// Individual-level state for both diseases and its daily evolution. The full
// course of a disease (symptom type, terminal outcome, lags) is drawn once at
// infection time and stored, so daily updates are O(events) rather than
// O(population): onsets and terminal outcomes are queued on per-day event
// lists, and group-level aggregates are maintained incrementally.

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fearsim/params.hpp"
#include "fearsim/random.hpp"

namespace fearsim {

enum class SymptomType : std::uint8_t { severe, mild, asymptomatic };

struct Individual {
    std::int32_t epi_infected_day = -1;
    std::int32_t epi_onset_day = -1;    // infection day + incubation
    std::int32_t epi_terminal_day = -1; // death or recovery day
    std::int32_t conf_infected_day = -1;
    std::int32_t conf_terminal_day = -1;
    std::int32_t detected_day = -1;
    std::int32_t pending_until = -1; // pending iff pending_until >= current day
    std::uint8_t group = 0;
    SymptomType epi_symptoms = SymptomType::asymptomatic;
    bool epi_dies = false;
    bool conf_severe = false;
    bool conf_dies = false;
    bool alive = true;
    bool detected = false;
    bool isolated = false;

    bool epi_ever() const { return epi_infected_day >= 0; }
    bool conf_ever() const { return conf_infected_day >= 0; }
    bool never_infected() const { return !epi_ever() && !conf_ever(); }
    bool epi_active(std::int32_t t) const {
        return epi_ever() && t >= epi_infected_day && t < epi_terminal_day;
    }
    bool epi_incubating(std::int32_t t) const { return epi_active(t) && t < epi_onset_day; }
    bool epi_displays(std::int32_t t) const {
        return epi_active(t) && t >= epi_onset_day &&
               (epi_symptoms == SymptomType::severe || epi_symptoms == SymptomType::mild);
    }
    bool conf_active(std::int32_t t) const {
        return conf_ever() && t >= conf_infected_day && t < conf_terminal_day;
    }
    bool displays_severe(std::int32_t t) const {
        return (epi_displays(t) && epi_symptoms == SymptomType::severe) ||
               (conf_active(t) && conf_severe);
    }
    bool displays_mild(std::int32_t t) const {
        return (epi_displays(t) && epi_symptoms == SymptomType::mild) ||
               (conf_active(t) && !conf_severe);
    }
    bool is_pending(std::int32_t t) const { return pending_until >= t; }
};

// Set of individual ids with O(1) add/remove/sample and O(size) iteration.
class IndexedSet {
  public:
    void reset(std::int64_t universe) {
        items_.clear();
        pos_.assign(static_cast<std::size_t>(universe), -1);
    }
    bool contains(std::int32_t id) const { return pos_[static_cast<std::size_t>(id)] >= 0; }
    std::int64_t size() const { return static_cast<std::int64_t>(items_.size()); }
    void add(std::int32_t id) {
        if (contains(id)) return;
        pos_[static_cast<std::size_t>(id)] = static_cast<std::int32_t>(items_.size());
        items_.push_back(id);
    }
    void remove(std::int32_t id) {
        const std::int32_t at = pos_[static_cast<std::size_t>(id)];
        if (at < 0) return;
        const std::int32_t last = items_.back();
        items_[static_cast<std::size_t>(at)] = last;
        pos_[static_cast<std::size_t>(last)] = at;
        items_.pop_back();
        pos_[static_cast<std::size_t>(id)] = -1;
    }
    std::int32_t sample(RngStream& rng) const {
        return items_[static_cast<std::size_t>(uniform_below(rng, items_.size()))];
    }
    const std::vector<std::int32_t>& items() const { return items_; }

  private:
    std::vector<std::int32_t> items_;
    std::vector<std::int32_t> pos_;
};

// Per-group aggregate counters, kept in lockstep with the individual records.
struct GroupCounts {
    std::int64_t initial_pop = 0;
    std::int64_t alive = 0;
    std::int64_t never_infected = 0;
    std::int64_t epi_cases = 0;     // cumulative
    std::int64_t epi_active = 0;    // currently infected
    std::int64_t epi_incubating = 0;
    std::int64_t epi_severe = 0;    // displaying severe epidemic symptoms
    std::int64_t epi_mild = 0;
    std::int64_t epi_asymp = 0;     // active past onset, no symptoms
    std::int64_t epi_deaths = 0;
    std::int64_t epi_recovered = 0;
    std::int64_t conf_cases = 0;
    std::int64_t conf_active = 0;
    std::int64_t conf_severe = 0;   // displaying severe confounding symptoms
    std::int64_t conf_deaths = 0;
    std::int64_t conf_recovered = 0;
    std::int64_t detected_cases = 0;          // cumulative detected
    std::int64_t detected_active = 0;         // detected with active infection
    std::int64_t detected_active_severe = 0;  // of which displaying severe
    std::int64_t reported_deaths = 0;         // deaths among detected cases
};

// One day's chosen epidemic course, fixed at infection time.
struct EpidemicCourse {
    SymptomType type;
    bool dies;
    std::int32_t onset_lag;    // days from infection to symptom onset
    std::int32_t terminal_lag; // days from infection to death/recovery
};

// Symptom type ~ (s, m, a); outcome ~ Bernoulli(phi_type); lags drawn
// independently of type and outcome (up to the optional non-severe recovery
// lag). The whole course is consumed from one stream keyed by individual id.
inline EpidemicCourse schedule_epidemic_course(RngStream& rng, const EpidemicDiseaseSpec& spec,
                                               double phi_severe) {
    EpidemicCourse course{};
    if (spec.lag_model == LagModel::geometric_sir) {
        course.type = SymptomType::asymptomatic;
        course.dies = false;
        course.onset_lag = 0;
        course.terminal_lag =
            static_cast<std::int32_t>(geometric(rng, 1.0 / static_cast<double>(spec.q_tilde)));
        return course;
    }

    const double u = uniform01(rng);
    if (u < spec.s)
        course.type = SymptomType::severe;
    else if (u < spec.s + spec.m)
        course.type = SymptomType::mild;
    else
        course.type = SymptomType::asymptomatic;

    const double phi = course.type == SymptomType::severe ? phi_severe
                       : course.type == SymptomType::mild ? spec.phi_m
                                                          : spec.phi_a;
    course.dies = bernoulli(rng, phi);

    const auto incubation =
        static_cast<std::int32_t>(shifted_poisson(rng, static_cast<double>(spec.p - 1)));
    const auto to_death = static_cast<std::int32_t>(poisson(rng, static_cast<double>(spec.k_tilde)));
    const std::int64_t q_mean = (course.type != SymptomType::severe && spec.q_tilde_nonsevere)
                                    ? *spec.q_tilde_nonsevere
                                    : spec.q_tilde;
    const auto to_recovery = static_cast<std::int32_t>(poisson(rng, static_cast<double>(q_mean)));

    course.onset_lag = incubation;
    course.terminal_lag = incubation + (course.dies ? to_death : to_recovery);
    assert(course.terminal_lag >= course.onset_lag && course.onset_lag >= 1);
    return course;
}

class SimulationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// The latent population state: individual records, membership sets used by
// the testing policy, per-day event queues, and cached aggregates.
class PopulationState {
  public:
    std::vector<Individual> people;
    // One susceptible pool per group; union = never infected by any disease.
    std::vector<IndexedSet> susceptible;
    IndexedSet severe_display;  // alive and displaying severe symptoms, any disease
    IndexedSet mild_display;    // alive and displaying mild symptoms, any disease
    // Alive, symptomless, not detected, not pending: the screening pool.
    IndexedSet asymp_eligible;
    std::vector<GroupCounts> counts;
    std::int32_t horizon = 0;

    void init(const ValidatedScenario& sc, std::uint64_t seed) {
        const auto n_groups = sc.group_count();
        horizon = static_cast<std::int32_t>(sc.config.t_horizon);
        people.assign(static_cast<std::size_t>(sc.config.p0), Individual{});
        counts.assign(n_groups, GroupCounts{});
        susceptible.resize(n_groups);
        severe_display.reset(sc.config.p0);
        mild_display.reset(sc.config.p0);
        asymp_eligible.reset(sc.config.p0);
        last_flushed_ = -1;
        const std::size_t slots = static_cast<std::size_t>(horizon) + 2;
        epi_infect_at_.assign(slots, {});
        epi_onset_at_.assign(slots, {});
        epi_terminal_at_.assign(slots, {});
        conf_infect_at_.assign(slots, {});
        conf_terminal_at_.assign(slots, {});
        requeue_at_.assign(slots, {});

        std::int32_t next_id = 0;
        for (std::size_t g = 0; g < n_groups; ++g) {
            susceptible[g].reset(sc.config.p0);
            counts[g].initial_pop = sc.group_pop[g];
            counts[g].alive = sc.group_pop[g];
            counts[g].never_infected = sc.group_pop[g];
            for (std::int64_t i = 0; i < sc.group_pop[g]; ++i, ++next_id) {
                people[static_cast<std::size_t>(next_id)].group = static_cast<std::uint8_t>(g);
                susceptible[g].add(next_id);
                asymp_eligible.add(next_id);
            }
        }

        // Initial infections become active on day 0.
        auto assign_rng = make_stream(seed, Stream::infection_assign, 0);
        for (std::size_t g = 0; g < n_groups; ++g) {
            for (std::int64_t i = 0; i < sc.norm_groups[g].c0; ++i) {
                const std::int32_t id = susceptible[g].sample(assign_rng);
                infect_epidemic(sc, seed, id, 0);
            }
        }
        flush_day(0);
    }

    // --- queries ---------------------------------------------------------

    std::size_t group_count() const { return counts.size(); }

    std::int64_t alive_total() const {
        std::int64_t n = 0;
        for (const auto& c : counts) n += c.alive;
        return n;
    }
    std::int64_t never_infected_total() const {
        std::int64_t n = 0;
        for (const auto& c : counts) n += c.never_infected;
        return n;
    }
    std::int64_t latent_active_total() const {
        std::int64_t n = 0;
        for (const auto& c : counts) n += c.epi_active;
        return n;
    }
    std::int64_t detected_active_total() const {
        std::int64_t n = 0;
        for (const auto& c : counts) n += c.detected_active;
        return n;
    }
    std::int64_t severe_total() const { return severe_display.size(); }

    // --- infection draws (executed at the end of day t for day t+1) -------

    // Commits a new epidemic infection starting at `day`.
    void infect_epidemic(const ValidatedScenario& sc, std::uint64_t seed, std::int32_t id,
                         std::int32_t day) {
        Individual& ind = people[static_cast<std::size_t>(id)];
        assert(ind.never_infected() && ind.alive);
        auto sched_rng =
            make_stream(seed, Stream::disease_schedule, static_cast<std::uint64_t>(id));
        const auto course =
            schedule_epidemic_course(sched_rng, sc.config.epidemic, sc.norm_groups[ind.group].phi_s);
        ind.epi_infected_day = day;
        ind.epi_onset_day = day + course.onset_lag;
        ind.epi_terminal_day = day + course.terminal_lag;
        ind.epi_symptoms = course.type;
        ind.epi_dies = course.dies;
        susceptible[ind.group].remove(id);
        push_event(epi_infect_at_, day, id);
        push_event(epi_onset_at_, ind.epi_onset_day, id);
        push_event(epi_terminal_at_, ind.epi_terminal_day, id);
    }

    void infect_confounding(const ValidatedScenario& sc, std::uint64_t seed, std::int32_t id,
                            std::int32_t day) {
        Individual& ind = people[static_cast<std::size_t>(id)];
        assert(ind.never_infected() && ind.alive);
        auto sched_rng =
            make_stream(seed, Stream::confounding_schedule, static_cast<std::uint64_t>(id));
        ind.conf_severe = bernoulli(sched_rng, sc.config.confounding.s_f);
        ind.conf_dies = bernoulli(sched_rng, sc.config.confounding.phi_f);
        ind.conf_infected_day = day;
        ind.conf_terminal_day =
            day + static_cast<std::int32_t>(ind.conf_dies ? sc.config.confounding.k_f
                                                          : sc.config.confounding.q_f);
        susceptible[ind.group].remove(id);
        push_event(conf_infect_at_, day, id);
        push_event(conf_terminal_at_, ind.conf_terminal_day, id);
    }

    // New epidemic infections for day t+1: one binomial draw per group at the
    // group's infection risk, realized by uniform sampling of susceptibles.
    std::vector<std::int64_t> draw_new_epidemic_infections(const ValidatedScenario& sc,
                                                           std::uint64_t seed, std::int32_t t,
                                                           const std::vector<double>& group_ir) {
        auto count_rng = make_stream(seed, Stream::infection_count, static_cast<std::uint64_t>(t));
        auto assign_rng =
            make_stream(seed, Stream::infection_assign, static_cast<std::uint64_t>(t) + 1);
        std::vector<std::int64_t> drawn(group_count(), 0);
        for (std::size_t g = 0; g < group_count(); ++g) {
            const std::int64_t pool = susceptible[g].size();
            const std::int64_t k = binomial(count_rng, pool, group_ir[g]);
            for (std::int64_t i = 0; i < k; ++i) {
                const std::int32_t id = susceptible[g].sample(assign_rng);
                infect_epidemic(sc, seed, id, t + 1);
            }
            drawn[g] = k;
        }
        return drawn;
    }

    // New confounding infections for day t+1: a rounded-normal total, capped
    // by the remaining never-infected pool and assigned uniformly across it.
    std::int64_t draw_confounding_infections(const ValidatedScenario& sc, std::uint64_t seed,
                                             std::int32_t t) {
        const auto& f = sc.config.confounding;
        if (f.omega_f <= 0.0) return 0;
        const double mean =
            f.omega_f * static_cast<double>(sc.config.p0) / static_cast<double>(sc.config.t_horizon);
        auto count_rng =
            make_stream(seed, Stream::confounding_count, static_cast<std::uint64_t>(t));
        auto assign_rng =
            make_stream(seed, Stream::confounding_assign, static_cast<std::uint64_t>(t));
        std::int64_t n = rounded_normal(count_rng, mean, f.sigma_f * mean);
        std::int64_t pool_total = 0;
        for (const auto& s : susceptible) pool_total += s.size();
        n = std::min(n, pool_total);
        for (std::int64_t i = 0; i < n; ++i) {
            // Uniform over the union of the per-group pools.
            std::uint64_t u = uniform_below(assign_rng, static_cast<std::uint64_t>(pool_total));
            std::size_t g = 0;
            while (u >= static_cast<std::uint64_t>(susceptible[g].size())) {
                u -= static_cast<std::uint64_t>(susceptible[g].size());
                ++g;
            }
            const std::int32_t id = susceptible[g].items()[static_cast<std::size_t>(u)];
            infect_confounding(sc, seed, id, t + 1);
            --pool_total;
        }
        return n;
    }

    // --- daily progression -------------------------------------------------

    // Applies every state transition due at day t: infections committed the
    // evening before, symptom onsets, terminal outcomes, and re-entry of
    // individuals whose negative test result has cleared. Days must be
    // advanced strictly in order.
    void advance_day(std::int32_t t) {
        if (t != last_flushed_ + 1)
            throw SimulationError("advance_day: days must be processed in order");
        flush_day(t);
    }

    // Called by the testing system when a negative result frees an individual
    // for retesting from day `day` on.
    void requeue_for_testing(std::int32_t id, std::int32_t day) {
        push_event(requeue_at_, day, id);
    }

    std::int64_t new_epi_infections_at(std::int32_t t) const {
        return t < static_cast<std::int32_t>(epi_infect_at_.size())
                   ? static_cast<std::int64_t>(epi_infect_at_[static_cast<std::size_t>(t)].size())
                   : 0;
    }
    std::int64_t new_conf_infections_at(std::int32_t t) const {
        return t < static_cast<std::int32_t>(conf_infect_at_.size())
                   ? static_cast<std::int64_t>(conf_infect_at_[static_cast<std::size_t>(t)].size())
                   : 0;
    }

    // Full recount of the cached aggregates from the individual records.
    // Used by tests and invariant checks; never on the hot path.
    std::vector<GroupCounts> recount(std::int32_t t) const {
        std::vector<GroupCounts> out(group_count());
        for (std::size_t g = 0; g < group_count(); ++g)
            out[g].initial_pop = counts[g].initial_pop;
        for (std::size_t i = 0; i < people.size(); ++i) {
            const Individual& ind = people[i];
            GroupCounts& c = out[ind.group];
            if (ind.alive) c.alive++;
            if (ind.never_infected()) c.never_infected++;
            if (ind.epi_ever() && ind.epi_infected_day <= t) {
                c.epi_cases++;
                if (ind.epi_active(t)) {
                    c.epi_active++;
                    if (ind.epi_incubating(t))
                        c.epi_incubating++;
                    else if (ind.epi_symptoms == SymptomType::severe)
                        c.epi_severe++;
                    else if (ind.epi_symptoms == SymptomType::mild)
                        c.epi_mild++;
                    else
                        c.epi_asymp++;
                } else if (t >= ind.epi_terminal_day) {
                    if (ind.epi_dies)
                        c.epi_deaths++;
                    else
                        c.epi_recovered++;
                }
            }
            if (ind.conf_ever() && ind.conf_infected_day <= t) {
                c.conf_cases++;
                if (ind.conf_active(t)) {
                    c.conf_active++;
                    if (ind.conf_severe) c.conf_severe++;
                } else if (t >= ind.conf_terminal_day) {
                    if (ind.conf_dies)
                        c.conf_deaths++;
                    else
                        c.conf_recovered++;
                }
            }
            if (ind.detected) {
                c.detected_cases++;
                if (ind.alive && ind.epi_active(t)) {
                    c.detected_active++;
                    if (ind.displays_severe(t)) c.detected_active_severe++;
                }
                if (!ind.alive && ind.epi_dies) c.reported_deaths++;
            }
        }
        return out;
    }

    // Marks an individual detected (positive result returned at day t).
    // Returns true if this detection also reports a death.
    bool mark_detected(std::int32_t id, std::int32_t t) {
        Individual& ind = people[static_cast<std::size_t>(id)];
        assert(!ind.detected);
        ind.detected = true;
        ind.detected_day = t;
        GroupCounts& c = counts[ind.group];
        c.detected_cases++;
        asymp_eligible.remove(id);
        if (!ind.alive) {
            // Posthumous confirmation; the death becomes reportable now.
            c.reported_deaths++;
            return true;
        }
        if (ind.epi_active(t)) {
            ind.isolated = true;
            c.detected_active++;
            if (ind.displays_severe(t)) c.detected_active_severe++;
        }
        return false;
    }

  private:
    std::vector<std::vector<std::int32_t>> epi_infect_at_;
    std::vector<std::vector<std::int32_t>> epi_onset_at_;
    std::vector<std::vector<std::int32_t>> epi_terminal_at_;
    std::vector<std::vector<std::int32_t>> conf_infect_at_;
    std::vector<std::vector<std::int32_t>> conf_terminal_at_;
    std::vector<std::vector<std::int32_t>> requeue_at_;
    std::int32_t last_flushed_ = -1;

    void push_event(std::vector<std::vector<std::int32_t>>& where, std::int32_t day,
                    std::int32_t id) {
        if (day >= 0 && day < static_cast<std::int32_t>(where.size()))
            where[static_cast<std::size_t>(day)].push_back(id);
    }

    void flush_day(std::int32_t t) {
        last_flushed_ = t;
        const auto slot = static_cast<std::size_t>(t);
        if (slot >= epi_infect_at_.size()) return;

        for (const std::int32_t id : epi_infect_at_[slot]) {
            Individual& ind = people[static_cast<std::size_t>(id)];
            GroupCounts& c = counts[ind.group];
            c.never_infected--;
            c.epi_cases++;
            c.epi_active++;
            c.epi_incubating++;
        }
        for (const std::int32_t id : conf_infect_at_[slot]) {
            Individual& ind = people[static_cast<std::size_t>(id)];
            GroupCounts& c = counts[ind.group];
            c.never_infected--;
            c.conf_cases++;
            c.conf_active++;
            // No incubation: symptoms display immediately.
            if (ind.conf_severe) {
                c.conf_severe++;
                severe_display.add(id);
            } else {
                mild_display.add(id);
            }
            asymp_eligible.remove(id);
        }
        for (const std::int32_t id : requeue_at_[slot]) {
            const Individual& ind = people[static_cast<std::size_t>(id)];
            if (ind.alive && !ind.detected && !ind.is_pending(t) && !ind.displays_severe(t) &&
                !ind.displays_mild(t))
                asymp_eligible.add(id);
        }
        for (const std::int32_t id : epi_onset_at_[slot]) {
            Individual& ind = people[static_cast<std::size_t>(id)];
            assert(ind.alive); // nothing can kill an individual during incubation
            GroupCounts& c = counts[ind.group];
            c.epi_incubating--;
            switch (ind.epi_symptoms) {
                case SymptomType::severe:
                    c.epi_severe++;
                    severe_display.add(id);
                    asymp_eligible.remove(id);
                    // already-detected case turning severe
                    if (ind.isolated) c.detected_active_severe++;
                    break;
                case SymptomType::mild:
                    c.epi_mild++;
                    mild_display.add(id);
                    asymp_eligible.remove(id);
                    break;
                case SymptomType::asymptomatic:
                    c.epi_asymp++;
                    break;
            }
        }
        for (const std::int32_t id : epi_terminal_at_[slot]) {
            Individual& ind = people[static_cast<std::size_t>(id)];
            GroupCounts& c = counts[ind.group];
            c.epi_active--;
            const bool past_onset = t >= ind.epi_onset_day;
            if (!past_onset)
                c.epi_incubating--;
            else if (ind.epi_symptoms == SymptomType::severe)
                c.epi_severe--;
            else if (ind.epi_symptoms == SymptomType::mild)
                c.epi_mild--;
            else
                c.epi_asymp--;
            if (past_onset && ind.epi_symptoms == SymptomType::severe) severe_display.remove(id);
            if (past_onset && ind.epi_symptoms == SymptomType::mild) mild_display.remove(id);
            if (ind.isolated) {
                ind.isolated = false;
                c.detected_active--;
                if (past_onset && ind.epi_symptoms == SymptomType::severe)
                    c.detected_active_severe--;
            }
            if (ind.epi_dies) {
                ind.alive = false;
                c.alive--;
                c.epi_deaths++;
                if (ind.detected) c.reported_deaths++;
                asymp_eligible.remove(id);
            } else {
                c.epi_recovered++;
                if (!ind.detected && !ind.is_pending(t) && !ind.displays_severe(t) &&
                    !ind.displays_mild(t))
                    asymp_eligible.add(id);
            }
        }
        for (const std::int32_t id : conf_terminal_at_[slot]) {
            Individual& ind = people[static_cast<std::size_t>(id)];
            GroupCounts& c = counts[ind.group];
            c.conf_active--;
            if (ind.conf_severe) {
                c.conf_severe--;
                severe_display.remove(id);
            } else {
                mild_display.remove(id);
            }
            if (ind.conf_dies) {
                ind.alive = false;
                c.alive--;
                c.conf_deaths++;
                asymp_eligible.remove(id);
            } else {
                c.conf_recovered++;
                if (!ind.detected && !ind.is_pending(t) && !ind.displays_severe(t) &&
                    !ind.displays_mild(t))
                    asymp_eligible.add(id);
            }
        }
    }
};

} // namespace fearsim
