// SPDX-License-Identifier: Apache-2.0
#ifndef FCS_BASELINES_HPP
#define FCS_BASELINES_HPP

#include <vector>

#include "fcs/core.hpp"

namespace fcs {

/// Station capacity as seen by a single-slot policy call.
struct CapacityView {
    Architecture arch = Architecture::Conventional;
    double p_cs_kw = 0.0;
    int m_cs = 0;         // modular only
    double p_mdl_kw = 0.0;
    int m_port = 0;
};

/// Per-EV session facts consumed by the ordering heuristics,
/// index-aligned with the request vector.
struct SessionContext {
    std::vector<int> arrival_index;          // 0 = first to arrive
    std::vector<double> remaining_energy_kwh;
    std::vector<double> soc;
    std::vector<double> charged_kwh;
};

/// Equal share of the station capacity, capped by each request.
SlotAllocation alloc_es(const CapacityView& cap,
                        const std::vector<PowerRequest>& requests);

/// Share proportional to remaining energy to full charge. Degenerate
/// all-zero remaining energy falls back to equal proportions.
SlotAllocation alloc_rep(const CapacityView& cap,
                         const std::vector<PowerRequest>& requests,
                         const SessionContext& ctx);

/// Five-way combined strategy: an equal-distribution share plus greedy
/// first-come / least-energy / lowest-soc / least-charged passes, each
/// funded by a fifth of the capacity with unusable remainder rolling
/// forward. Modular form deals one module per EV and then cycles the four
/// ordering heads one module at a time.
SlotAllocation alloc_cc(const CapacityView& cap,
                        const std::vector<PowerRequest>& requests,
                        const SessionContext& ctx);

/// Guaranteed minimum of x% of the equal share, then first-come-first-served
/// top-ups from whatever capacity remains.
SlotAllocation alloc_fcfs_smx(const CapacityView& cap,
                              const std::vector<PowerRequest>& requests,
                              const SessionContext& ctx, double x_pct = 50.0);

enum class WelfareObjective { MUW, MEW, MNW };

std::string to_string(WelfareObjective obj);

/// Accumulator for welfare objective sums. Individual utility terms are
/// doubles; summing them in quad precision keeps the comparison of two
/// candidate allocations independent of association order, so the dynamic
/// program and an enumerating checker rank ties identically.
using WelfareAccum = __float128;

/// Exact optimum over the continuous feasible set, in closed form:
/// MUW fills ascending requests, MEW equalizes utilities, MNW water-fills
/// (solved independently by bisection on the common share).
SlotAllocation oracle_welfare_continuous(WelfareObjective obj, double p_cs_kw,
                                         const std::vector<PowerRequest>& requests);

/// Largest instance the modular welfare solver accepts: beyond
/// |E| <= kDeskScaleEvs or m_cs <= kDeskScaleModules it refuses.
inline constexpr int kDeskScaleEvs = 8;
inline constexpr int kDeskScaleModules = 30;

bool modular_oracle_in_scale(std::size_t n_evs, int m_cs);

/// Exact optimum over the integer feasible set via dynamic programming over
/// (EV index, modules remaining). Optima are tie-broken to the
/// lexicographically smallest allocation vector; MEW additionally maximizes
/// total utility among max-min optima before the lexicographic step, and MNW
/// maximizes the count of positive utilities before the Nash product.
/// Throws std::domain_error above desk scale.
SlotAllocation oracle_welfare_modular(WelfareObjective obj, int m_cs,
                                      const std::vector<PowerRequest>& requests,
                                      double p_mdl_kw);

}  // namespace fcs

#endif  // FCS_BASELINES_HPP
