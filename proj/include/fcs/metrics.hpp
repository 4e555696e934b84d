// SPDX-License-Identifier: Apache-2.0
#ifndef FCS_METRICS_HPP
#define FCS_METRICS_HPP

#include <vector>

#include "fcs/core.hpp"

namespace fcs {

/// Instantaneous scores for one slot; everything lives in [0, 1].
struct SlotScores {
    double envy_freeness = 1.0;   // conventional allocations
    double envy1_freeness = 1.0;  // modular allocations
    double efficiency = 1.0;
    std::vector<double> utilities;
};

/// min(p/p_req, 1); a zero request counts as fully satisfied.
double utility_score(double p_alloc_kw, double p_req_kw);

/// 1 - max pairwise envy u_i(p_j) - u_i(p_i) over the slot.
double envy_freeness_score(const SlotAllocation& a);

/// Modular relaxation: envy after removing one module from the envied
/// bundle, with the empty-minus-one bundle valued at zero.
double envy1_freeness_score(const SlotAllocation& a);

/// Allocated power over usable power min(p_cs, total request), clamped to
/// [0, 1]; a slot with no demand scores 1.
double efficiency_score(const SlotAllocation& a, double p_cs_t_kw);

SlotScores score_slot(const SlotAllocation& a, Architecture arch, double p_cs_t_kw);

/// One EV's recorded charging session: the power profile it was allocated
/// and the SoC trajectory that resulted. `alloc_kw` and `soc_after` have one
/// entry per connected slot.
struct ProfileRecord {
    int ev_id = 0;
    long connect_slot = 0;
    double initial_soc = 0.0;
    double target_soc = 1.0;
    double delta_t_min = kDefaultSlotMinutes;
    double p_port_kw = 0.0;
    ChargeCurvePtr curve;
    std::vector<double> alloc_kw;
    std::vector<double> soc_after;
};

/// SoC improvement EV `i` would have seen after `tau_slots` of EV `j`'s
/// power profile, relative to its own recorded trajectory. The replayed
/// charge stops at the session target, profiles past their end deliver
/// nothing, and the recorded trajectory holds its final value after
/// departure. Never negative.
double soc_gain(const ProfileRecord& i, const ProfileRecord& j, long tau_slots);

/// 1 - max SoCGain over all ordered profile pairs at the given horizon.
double soc_envy_freeness(const std::vector<ProfileRecord>& profiles,
                         double tau_minutes);

/// Same score across several horizons, walking each pair's replay once.
std::vector<double> soc_envy_freeness_curve(const std::vector<ProfileRecord>& profiles,
                                            const std::vector<double>& taus_minutes);

}  // namespace fcs

#endif  // FCS_METRICS_HPP
