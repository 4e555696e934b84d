// SPDX-License-Identifier: Apache-2.0
#include "fcs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fcs/allocators.hpp"

namespace fcs {

double utility_score(double p_alloc_kw, double p_req_kw) {
    return utility_power(p_alloc_kw, p_req_kw);
}

double envy_freeness_score(const SlotAllocation& a) {
    const std::size_t n = a.requests.size();
    if (n < 2) return 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double req = a.requests[i].p_req_kw;
        const double own = utility_power(a.alloc_kw[i], req);
        for (std::size_t j = 0; j < n; ++j) {
            worst = std::max(worst, utility_power(a.alloc_kw[j], req) - own);
        }
    }
    return 1.0 - worst;
}

double envy1_freeness_score(const SlotAllocation& a) {
    const std::size_t n = a.requests.size();
    if (n < 2) return 1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double req = a.requests[i].m_req;
        const double own = utility_modules(a.alloc_modules[i], req);
        for (std::size_t j = 0; j < n; ++j) {
            worst = std::max(worst,
                             utility_modules(a.alloc_modules[j] - 1, req) - own);
        }
    }
    return 1.0 - worst;
}

double efficiency_score(const SlotAllocation& a, double p_cs_t_kw) {
    double allocated = 0.0;
    double demanded = 0.0;
    for (std::size_t i = 0; i < a.requests.size(); ++i) {
        allocated += a.alloc_kw[i];
        demanded += a.requests[i].p_req_kw;
    }
    if (demanded <= 0.0) return 1.0;
    const double usable = std::min(p_cs_t_kw, demanded);
    if (usable <= 0.0) return 1.0;
    return std::clamp(allocated / usable, 0.0, 1.0);
}

SlotScores score_slot(const SlotAllocation& a, Architecture arch, double p_cs_t_kw) {
    SlotScores s;
    if (arch == Architecture::Conventional) {
        s.envy_freeness = envy_freeness_score(a);
    } else {
        s.envy1_freeness = envy1_freeness_score(a);
    }
    s.efficiency = efficiency_score(a, p_cs_t_kw);
    s.utilities.reserve(a.requests.size());
    for (std::size_t i = 0; i < a.requests.size(); ++i) {
        s.utilities.push_back(utility_power(a.alloc_kw[i], a.requests[i].p_req_kw));
    }
    return s;
}

namespace {

double actual_soc_at(const ProfileRecord& r, long tau_slots) {
    if (tau_slots <= 0 || r.soc_after.empty()) return r.initial_soc;
    const std::size_t k = std::min<std::size_t>(r.soc_after.size(),
                                                static_cast<std::size_t>(tau_slots));
    return r.soc_after[k - 1];
}

// Replays profile `j` into EV `i`'s battery slot by slot, reporting the
// counterfactual SoC at each requested horizon. Charging stops once the
// session target is reached, matching the recorded departure behavior.
void replay_profile(const ProfileRecord& i, const ProfileRecord& j,
                    const std::vector<long>& horizons, std::vector<double>& out) {
    if (!i.curve) {
        throw std::invalid_argument(
            "profile record lacks its charge curve; attach curves before "
            "replaying");
    }
    long max_tau = 0;
    for (long h : horizons) max_tau = std::max(max_tau, h);

    EvState ev;
    ev.ev_id = i.ev_id;
    ev.curve = i.curve;
    ev.soc = i.initial_soc;

    out.assign(horizons.size(), i.initial_soc);
    for (long k = 0; k < max_tau; ++k) {
        if (ev.soc < i.target_soc) {
            const double p = k < static_cast<long>(j.alloc_kw.size())
                                 ? j.alloc_kw[k]
                                 : 0.0;
            ev = apply_power(ev, p, i.delta_t_min, i.p_port_kw).state;
            if (ev.soc > i.target_soc) ev.soc = i.target_soc;
        }
        for (std::size_t h = 0; h < horizons.size(); ++h) {
            if (horizons[h] == k + 1) out[h] = ev.soc;
        }
    }
}

}  // namespace

double soc_gain(const ProfileRecord& i, const ProfileRecord& j, long tau_slots) {
    if (tau_slots <= 0) return 0.0;
    std::vector<double> counterfactual;
    replay_profile(i, j, {tau_slots}, counterfactual);
    return std::max(0.0, counterfactual[0] - actual_soc_at(i, tau_slots));
}

double soc_envy_freeness(const std::vector<ProfileRecord>& profiles,
                         double tau_minutes) {
    return soc_envy_freeness_curve(profiles, {tau_minutes})[0];
}

std::vector<double> soc_envy_freeness_curve(const std::vector<ProfileRecord>& profiles,
                                            const std::vector<double>& taus_minutes) {
    std::vector<double> worst(taus_minutes.size(), 0.0);
    if (profiles.size() < 2) {
        return std::vector<double>(taus_minutes.size(), 1.0);
    }

    std::vector<double> counterfactual;
    for (const auto& i : profiles) {
        std::vector<long> horizons;
        horizons.reserve(taus_minutes.size());
        for (double tau : taus_minutes) {
            horizons.push_back(static_cast<long>(std::llround(tau / i.delta_t_min)));
        }
        std::vector<double> actual(horizons.size());
        for (std::size_t h = 0; h < horizons.size(); ++h) {
            actual[h] = actual_soc_at(i, horizons[h]);
        }
        for (const auto& j : profiles) {
            if (&i == &j) continue;
            replay_profile(i, j, horizons, counterfactual);
            for (std::size_t h = 0; h < horizons.size(); ++h) {
                worst[h] = std::max(worst[h], counterfactual[h] - actual[h]);
            }
        }
    }

    std::vector<double> scores(taus_minutes.size());
    for (std::size_t h = 0; h < scores.size(); ++h) {
        scores[h] = 1.0 - std::max(0.0, worst[h]);
    }
    return scores;
}

}  // namespace fcs
