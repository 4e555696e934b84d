// SPDX-License-Identifier: Apache-2.0
#ifndef FCS_ALLOCATORS_HPP
#define FCS_ALLOCATORS_HPP

#include <cstdint>
#include <vector>

#include "fcs/core.hpp"

namespace fcs {

/// Normalized satisfaction of a continuous allocation: min(p/p_req, 1).
/// An EV that requested nothing is treated as fully satisfied.
double utility_power(double p_alloc_kw, double p_req_kw);

/// Module-space utility min(m/m_req, 1), with u(m) = 0 for m < 0 so the
/// one-module-removed comparison is defined for empty bundles.
double utility_modules(int m_alloc, double m_req);

/// Progressive-filling allocation for continuously adjustable ports.
/// Processes EVs in ascending request order; each unfulfilled EV either
/// receives its full request or the common final share. Optionally records
/// the share value of each iteration into `share_trace`.
SlotAllocation fair_opap_c(double p_cs_kw, const std::vector<PowerRequest>& requests,
                           std::vector<double>* share_trace = nullptr);

enum class SortKind {
    MarginalGain,  // descending gain of the next module, ties by soc then id
    StableId,      // ascending ev_id
    RandomSeeded,  // deterministic shuffle from the policy seed
};

struct SortingPolicy {
    SortKind kind = SortKind::MarginalGain;
    std::uint64_t seed = 0;
};

struct UnfulfilledEv {
    int ev_id = 0;
    int m_current = 0;
    double m_req = 0.0;
    double soc = 0.0;
};

/// Orders the unfulfilled set for one allocation round. All entries must
/// share the same module count (round uniformity); mixed counts indicate a
/// broken allocator loop and throw std::logic_error.
std::vector<int> sort_unfulfilled(const std::vector<UnfulfilledEv>& unfulfilled,
                                  const SortingPolicy& policy);

/// Snapshot of the unfulfilled set at the start of one allocation round.
struct RoundRecord {
    int round = 0;  // 1-based
    std::vector<std::pair<int, int>> holdings;  // (ev_id, modules held)
};

/// Round-based module allocation for modular stations. Each round sorts the
/// unfulfilled EVs and hands out one module apiece until the capacity
/// min(m_cs, sum ceil(m_req)) is exhausted; an EV leaves the round set once
/// it holds ceil(m_req) modules. Throws std::domain_error on negative m_cs.
SlotAllocation fair_opap_m(int m_cs, const std::vector<PowerRequest>& requests,
                           const std::vector<double>& socs,
                           const SortingPolicy& policy,
                           double p_mdl_kw,
                           std::vector<RoundRecord>* rounds = nullptr);

}  // namespace fcs

#endif  // FCS_ALLOCATORS_HPP
