// SPDX-License-Identifier: Apache-2.0
#include "fcs/allocators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace fcs {

double utility_power(double p_alloc_kw, double p_req_kw) {
    if (p_req_kw <= 0.0) return 1.0;
    return std::min(p_alloc_kw / p_req_kw, 1.0);
}

double utility_modules(int m_alloc, double m_req) {
    if (m_alloc < 0) return 0.0;
    if (m_req <= 0.0) return 1.0;
    return std::min(static_cast<double>(m_alloc) / m_req, 1.0);
}

SlotAllocation fair_opap_c(double p_cs_kw, const std::vector<PowerRequest>& requests,
                           std::vector<double>* share_trace) {
    if (p_cs_kw < 0.0) {
        throw std::domain_error("fair_opap_c: negative station cap");
    }
    SlotAllocation out;
    out.policy_id = "fair-opap";
    out.requests = requests;
    out.alloc_kw.assign(requests.size(), 0.0);
    if (requests.empty()) return out;

    std::vector<std::size_t> order;
    double total_demand = 0.0;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const double r = requests[i].p_req_kw;
        if (r < 0.0) {
            throw std::domain_error("fair_opap_c: negative power request");
        }
        if (r > 0.0) {
            order.push_back(i);
            total_demand += r;
        }
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (requests[a].p_req_kw != requests[b].p_req_kw) {
            return requests[a].p_req_kw < requests[b].p_req_kw;
        }
        return requests[a].ev_id < requests[b].ev_id;
    });

    double remaining = std::min(p_cs_kw, total_demand);
    std::size_t unfulfilled = order.size();
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double share = remaining / static_cast<double>(unfulfilled);
        if (share_trace) share_trace->push_back(share);
        const double req = requests[order[k]].p_req_kw;
        if (share >= req - kPowerEps) {
            out.alloc_kw[order[k]] = req;
            remaining = std::max(0.0, remaining - req);
            --unfulfilled;
        } else {
            for (std::size_t j = k; j < order.size(); ++j) {
                out.alloc_kw[order[j]] = share;
            }
            break;
        }
    }
    return out;
}

namespace {

double marginal_module_gain(int m_current, double m_req) {
    return std::min((m_current + 1) / m_req, 1.0) - m_current / m_req;
}

}  // namespace

std::vector<int> sort_unfulfilled(const std::vector<UnfulfilledEv>& unfulfilled,
                                  const SortingPolicy& policy) {
    if (unfulfilled.empty()) return {};
    for (const auto& e : unfulfilled) {
        if (e.m_current != unfulfilled.front().m_current) {
            throw std::logic_error(
                "sort_unfulfilled: mixed module counts in the unfulfilled set");
        }
    }

    std::vector<std::size_t> idx(unfulfilled.size());
    std::iota(idx.begin(), idx.end(), 0);

    switch (policy.kind) {
        case SortKind::MarginalGain:
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                const auto& ea = unfulfilled[a];
                const auto& eb = unfulfilled[b];
                const double ga = marginal_module_gain(ea.m_current, ea.m_req);
                const double gb = marginal_module_gain(eb.m_current, eb.m_req);
                if (ga != gb) return ga > gb;
                if (ea.soc != eb.soc) return ea.soc < eb.soc;
                return ea.ev_id < eb.ev_id;
            });
            break;
        case SortKind::StableId:
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                return unfulfilled[a].ev_id < unfulfilled[b].ev_id;
            });
            break;
        case SortKind::RandomSeeded: {
            // Per-call generator keyed off the policy seed and the round
            // context, so identical inputs always shuffle identically.
            std::uint64_t mix = policy.seed;
            mix ^= static_cast<std::uint64_t>(unfulfilled.front().m_current) *
                   0x9e3779b97f4a7c15ULL;
            mix ^= static_cast<std::uint64_t>(unfulfilled.size()) << 32;
            std::mt19937_64 rng(mix);
            std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                return unfulfilled[a].ev_id < unfulfilled[b].ev_id;
            });
            std::shuffle(idx.begin(), idx.end(), rng);
            break;
        }
    }

    std::vector<int> ids;
    ids.reserve(idx.size());
    for (auto i : idx) ids.push_back(unfulfilled[i].ev_id);
    return ids;
}

SlotAllocation fair_opap_m(int m_cs, const std::vector<PowerRequest>& requests,
                           const std::vector<double>& socs,
                           const SortingPolicy& policy,
                           double p_mdl_kw,
                           std::vector<RoundRecord>* rounds) {
    if (m_cs < 0) {
        throw std::domain_error("fair_opap_m: negative module cap");
    }
    if (socs.size() != requests.size()) {
        throw std::invalid_argument("fair_opap_m: socs not aligned with requests");
    }
    SlotAllocation out;
    out.policy_id = "fair-opap";
    out.requests = requests;
    out.alloc_modules.assign(requests.size(), 0);
    out.alloc_kw.assign(requests.size(), 0.0);
    if (requests.empty()) return out;

    std::vector<std::size_t> active;  // EVs with positive demand
    long demand_ceiling = 0;
    std::vector<int> need(requests.size(), 0);
    for (std::size_t i = 0; i < requests.size(); ++i) {
        if (requests[i].m_req < 0.0) {
            throw std::domain_error("fair_opap_m: negative module request");
        }
        if (requests[i].m_req > 0.0) {
            active.push_back(i);
            need[i] = static_cast<int>(std::ceil(requests[i].m_req));
            demand_ceiling += need[i];
        }
    }

    long capacity = std::min<long>(m_cs, demand_ceiling);
    std::vector<std::size_t> unfulfilled = active;
    int round = 0;
    while (capacity > 0 && !unfulfilled.empty()) {
        ++round;
        if (rounds) {
            RoundRecord rec;
            rec.round = round;
            for (auto i : unfulfilled) {
                rec.holdings.emplace_back(requests[i].ev_id, out.alloc_modules[i]);
            }
            rounds->push_back(std::move(rec));
        }

        std::vector<UnfulfilledEv> entries;
        entries.reserve(unfulfilled.size());
        for (auto i : unfulfilled) {
            entries.push_back({requests[i].ev_id, out.alloc_modules[i],
                               requests[i].m_req, socs[i]});
        }
        const auto ordered_ids = sort_unfulfilled(entries, policy);
        std::unordered_map<int, std::size_t> index_of;
        index_of.reserve(unfulfilled.size());
        for (auto i : unfulfilled) index_of.emplace(requests[i].ev_id, i);

        std::vector<std::size_t> next;
        next.reserve(unfulfilled.size());
        bool exhausted = false;
        for (int ev_id : ordered_ids) {
            const std::size_t i = index_of.at(ev_id);
            if (exhausted) {
                next.push_back(i);
                continue;
            }
            out.alloc_modules[i] += 1;
            --capacity;
            if (out.alloc_modules[i] < need[i]) {
                next.push_back(i);
            }
            if (capacity == 0) {
                exhausted = true;
            }
        }
        unfulfilled = std::move(next);
    }

    for (std::size_t i = 0; i < requests.size(); ++i) {
        out.alloc_kw[i] = out.alloc_modules[i] * p_mdl_kw;
    }
    return out;
}

}  // namespace fcs
