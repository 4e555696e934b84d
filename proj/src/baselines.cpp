// SPDX-License-Identifier: Apache-2.0
#include "fcs/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fcs/allocators.hpp"

namespace fcs {

namespace {

std::vector<std::size_t> active_indices(const std::vector<PowerRequest>& requests,
                                        Architecture arch) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < requests.size(); ++i) {
        const double demand =
            arch == Architecture::Modular ? requests[i].m_req : requests[i].p_req_kw;
        if (demand > 0.0) idx.push_back(i);
    }
    return idx;
}

int need_modules(const PowerRequest& r) {
    return static_cast<int>(std::ceil(r.m_req));
}

SlotAllocation blank(const std::vector<PowerRequest>& requests, Architecture arch,
                     const std::string& policy_id) {
    SlotAllocation out;
    out.policy_id = policy_id;
    out.requests = requests;
    out.alloc_kw.assign(requests.size(), 0.0);
    if (arch == Architecture::Modular) {
        out.alloc_modules.assign(requests.size(), 0);
    }
    return out;
}

void fill_kw_from_modules(SlotAllocation& a, double p_mdl_kw) {
    for (std::size_t i = 0; i < a.alloc_modules.size(); ++i) {
        a.alloc_kw[i] = a.alloc_modules[i] * p_mdl_kw;
    }
}

// Ordering used by the CC and FCFS-SMX strategies: ascending key, ties by
// arrival order, then by input position.
std::vector<std::size_t> order_by(const std::vector<std::size_t>& active,
                                  const std::vector<double>& key,
                                  const std::vector<int>& arrival) {
    std::vector<std::size_t> out = active;
    std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
        if (key[a] != key[b]) return key[a] < key[b];
        if (arrival[a] != arrival[b]) return arrival[a] < arrival[b];
        return a < b;
    });
    return out;
}

}  // namespace

SlotAllocation alloc_es(const CapacityView& cap,
                        const std::vector<PowerRequest>& requests) {
    auto out = blank(requests, cap.arch, "es");
    const auto active = active_indices(requests, cap.arch);
    if (active.empty()) return out;
    const double n = static_cast<double>(active.size());

    if (cap.arch == Architecture::Conventional) {
        const double share = cap.p_cs_kw / n;
        for (auto i : active) {
            out.alloc_kw[i] = std::min(share, requests[i].p_req_kw);
        }
    } else {
        const int share = static_cast<int>(cap.m_cs / active.size());
        for (auto i : active) {
            out.alloc_modules[i] = std::min(share, need_modules(requests[i]));
        }
        fill_kw_from_modules(out, cap.p_mdl_kw);
    }
    return out;
}

SlotAllocation alloc_rep(const CapacityView& cap,
                         const std::vector<PowerRequest>& requests,
                         const SessionContext& ctx) {
    auto out = blank(requests, cap.arch, "rep");
    const auto active = active_indices(requests, cap.arch);
    if (active.empty()) return out;

    double total_remaining = 0.0;
    for (auto i : active) total_remaining += ctx.remaining_energy_kwh[i];
    std::vector<double> alpha(requests.size(), 0.0);
    for (auto i : active) {
        alpha[i] = total_remaining > 0.0
                       ? ctx.remaining_energy_kwh[i] / total_remaining
                       : 1.0 / static_cast<double>(active.size());
    }

    if (cap.arch == Architecture::Conventional) {
        for (auto i : active) {
            out.alloc_kw[i] = std::min(alpha[i] * cap.p_cs_kw, requests[i].p_req_kw);
        }
    } else {
        auto order = active;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (alpha[a] != alpha[b]) return alpha[a] < alpha[b];
            return a < b;
        });
        int remaining = cap.m_cs;
        for (auto i : order) {
            if (remaining <= 0) break;
            const int grant = std::min(
                {static_cast<int>(std::ceil(alpha[i] * cap.m_cs)),
                 need_modules(requests[i]), remaining});
            out.alloc_modules[i] = std::max(grant, 0);
            remaining -= out.alloc_modules[i];
        }
        fill_kw_from_modules(out, cap.p_mdl_kw);
    }
    return out;
}

SlotAllocation alloc_cc(const CapacityView& cap,
                        const std::vector<PowerRequest>& requests,
                        const SessionContext& ctx) {
    auto out = blank(requests, cap.arch, "cc");
    const auto active = active_indices(requests, cap.arch);
    if (active.empty()) return out;

    std::vector<double> arrival_key(requests.size(), 0.0);
    for (auto i : active) arrival_key[i] = ctx.arrival_index[i];
    const auto fcfs = order_by(active, arrival_key, ctx.arrival_index);
    const auto lef = order_by(active, ctx.remaining_energy_kwh, ctx.arrival_index);
    const auto lsf = order_by(active, ctx.soc, ctx.arrival_index);
    const auto lcf = order_by(active, ctx.charged_kwh, ctx.arrival_index);
    const std::vector<const std::vector<std::size_t>*> strategies = {&fcfs, &lef,
                                                                     &lsf, &lcf};

    if (cap.arch == Architecture::Conventional) {
        const double bucket = cap.p_cs_kw / 5.0;
        auto residual = [&](std::size_t i) {
            return requests[i].p_req_kw - out.alloc_kw[i];
        };

        // Equal-distribution bucket, split evenly; the unusable part rolls on.
        double carry = 0.0;
        {
            const double share = bucket / static_cast<double>(active.size());
            double spent = 0.0;
            for (auto i : active) {
                const double grant = std::min(share, residual(i));
                out.alloc_kw[i] += grant;
                spent += grant;
            }
            carry = bucket - spent;
        }
        for (const auto* order : strategies) {
            double left = bucket + carry;
            for (auto i : *order) {
                if (left <= kPowerEps) break;
                const double grant = std::min(residual(i), left);
                if (grant <= 0.0) continue;
                out.alloc_kw[i] += grant;
                left -= grant;
            }
            carry = left;
        }
    } else {
        int remaining = cap.m_cs;
        auto unfulfilled = [&](std::size_t i) {
            return out.alloc_modules[i] < need_modules(requests[i]);
        };
        for (auto i : fcfs) {  // one module per EV first
            if (remaining <= 0) break;
            if (unfulfilled(i)) {
                out.alloc_modules[i] += 1;
                --remaining;
            }
        }
        bool any = true;
        while (remaining > 0 && any) {
            any = false;
            for (const auto* order : strategies) {
                if (remaining <= 0) break;
                for (auto i : *order) {
                    if (unfulfilled(i)) {
                        out.alloc_modules[i] += 1;
                        --remaining;
                        any = true;
                        break;
                    }
                }
            }
        }
        fill_kw_from_modules(out, cap.p_mdl_kw);
    }
    return out;
}

SlotAllocation alloc_fcfs_smx(const CapacityView& cap,
                              const std::vector<PowerRequest>& requests,
                              const SessionContext& ctx, double x_pct) {
    if (x_pct < 0.0 || x_pct > 100.0) {
        throw std::domain_error("alloc_fcfs_smx: x_pct outside [0, 100]");
    }
    auto out = blank(requests, cap.arch, "fcfs-smx");
    const auto active = active_indices(requests, cap.arch);
    if (active.empty()) return out;
    const double n = static_cast<double>(active.size());

    std::vector<double> arrival_key(requests.size(), 0.0);
    for (auto i : active) arrival_key[i] = ctx.arrival_index[i];
    const auto fcfs = order_by(active, arrival_key, ctx.arrival_index);

    if (cap.arch == Architecture::Conventional) {
        const double base_share = (x_pct / 100.0) * cap.p_cs_kw / n;
        double remaining = cap.p_cs_kw;
        for (auto i : active) {
            out.alloc_kw[i] = std::min(base_share, requests[i].p_req_kw);
            remaining -= out.alloc_kw[i];
        }
        for (auto i : fcfs) {
            if (remaining <= kPowerEps) break;
            const double grant =
                std::min(requests[i].p_req_kw - out.alloc_kw[i], remaining);
            if (grant <= 0.0) continue;
            out.alloc_kw[i] += grant;
            remaining -= grant;
        }
    } else {
        const int base_share =
            static_cast<int>(std::floor((x_pct / 100.0) * cap.m_cs / n));
        int remaining = cap.m_cs;
        for (auto i : active) {
            out.alloc_modules[i] = std::min(base_share, need_modules(requests[i]));
            remaining -= out.alloc_modules[i];
        }
        for (auto i : fcfs) {
            if (remaining <= 0) break;
            const int grant =
                std::min(need_modules(requests[i]) - out.alloc_modules[i], remaining);
            if (grant <= 0) continue;
            out.alloc_modules[i] += grant;
            remaining -= grant;
        }
        fill_kw_from_modules(out, cap.p_mdl_kw);
    }
    return out;
}

std::string to_string(WelfareObjective obj) {
    switch (obj) {
        case WelfareObjective::MUW: return "muw";
        case WelfareObjective::MEW: return "mew";
        default: return "mnw";
    }
}

SlotAllocation oracle_welfare_continuous(WelfareObjective obj, double p_cs_kw,
                                         const std::vector<PowerRequest>& requests) {
    if (p_cs_kw < 0.0) {
        throw std::domain_error("oracle_welfare_continuous: negative cap");
    }
    auto out = blank(requests, Architecture::Conventional, to_string(obj));
    const auto active = active_indices(requests, Architecture::Conventional);
    if (active.empty()) return out;

    double total_demand = 0.0;
    double max_req = 0.0;
    for (auto i : active) {
        total_demand += requests[i].p_req_kw;
        max_req = std::max(max_req, requests[i].p_req_kw);
    }
    const double budget = std::min(p_cs_kw, total_demand);

    switch (obj) {
        case WelfareObjective::MUW: {
            // Cheapest utility per kW first: ascending requests.
            auto order = active;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (requests[a].p_req_kw != requests[b].p_req_kw) {
                    return requests[a].p_req_kw < requests[b].p_req_kw;
                }
                return requests[a].ev_id < requests[b].ev_id;
            });
            double remaining = budget;
            for (auto i : order) {
                const double grant = std::min(requests[i].p_req_kw, remaining);
                out.alloc_kw[i] = grant;
                remaining -= grant;
                if (remaining <= 0.0) break;
            }
            break;
        }
        case WelfareObjective::MEW: {
            const double lambda =
                total_demand > 0.0 ? std::min(1.0, p_cs_kw / total_demand) : 1.0;
            for (auto i : active) {
                out.alloc_kw[i] = lambda * requests[i].p_req_kw;
            }
            break;
        }
        case WelfareObjective::MNW: {
            // Common-share water level found by bisection; independent of the
            // progressive-filling code path.
            double lo = 0.0;
            double hi = max_req;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                double filled = 0.0;
                for (auto i : active) {
                    filled += std::min(mid, requests[i].p_req_kw);
                }
                (filled < budget ? lo : hi) = mid;
            }
            for (auto i : active) {
                out.alloc_kw[i] = std::min(hi, requests[i].p_req_kw);
            }
            break;
        }
    }
    return out;
}

bool modular_oracle_in_scale(std::size_t n_evs, int m_cs) {
    return n_evs <= static_cast<std::size_t>(kDeskScaleEvs) ||
           m_cs <= kDeskScaleModules;
}

namespace {

// Suffix sums are accumulated back to front so an enumerating checker that
// adds terms in the same order reproduces the objective bit for bit.
struct ModularDp {
    const std::vector<int>& need;
    const std::vector<double>& m_req;
    int m_cs;

    std::size_t n() const { return need.size(); }

    template <typename Value, typename Term>
    std::vector<std::vector<Value>> tables(Term term, Value zero) const {
        std::vector<std::vector<Value>> g(n() + 1,
                                          std::vector<Value>(m_cs + 1, zero));
        for (std::size_t i = n(); i-- > 0;) {
            for (int c = 0; c <= m_cs; ++c) {
                Value best = term(i, 0) + g[i + 1][c];
                const int top = std::min(need[i], c);
                for (int m = 1; m <= top; ++m) {
                    const Value cand = term(i, m) + g[i + 1][c - m];
                    if (cand > best) best = cand;
                }
                g[i][c] = best;
            }
        }
        return g;
    }

    // Walks the table front to back taking the smallest module count that
    // still achieves the optimum, which yields the lexicographically
    // smallest maximizer.
    template <typename Value, typename Term>
    std::vector<int> reconstruct(const std::vector<std::vector<Value>>& g,
                                 Term term) const {
        std::vector<int> m(n(), 0);
        int c = m_cs;
        for (std::size_t i = 0; i < n(); ++i) {
            const int top = std::min(need[i], c);
            for (int k = 0; k <= top; ++k) {
                if (term(i, k) + g[i + 1][c - k] == g[i][c]) {
                    m[i] = k;
                    c -= k;
                    break;
                }
            }
        }
        return m;
    }
};

// Lexicographic pair (positive-utility count, Nash log-product).
struct NashValue {
    int count = 0;
    WelfareAccum log_sum = 0.0;

    NashValue operator+(const NashValue& o) const {
        return {count + o.count, log_sum + o.log_sum};
    }
    bool operator>(const NashValue& o) const {
        if (count != o.count) return count > o.count;
        return log_sum > o.log_sum;
    }
    bool operator==(const NashValue& o) const {
        return count == o.count && log_sum == o.log_sum;
    }
};

}  // namespace

SlotAllocation oracle_welfare_modular(WelfareObjective obj, int m_cs,
                                      const std::vector<PowerRequest>& requests,
                                      double p_mdl_kw) {
    if (m_cs < 0) {
        throw std::domain_error("oracle_welfare_modular: negative module cap");
    }
    auto out = blank(requests, Architecture::Modular, to_string(obj));
    const auto active = active_indices(requests, Architecture::Modular);
    if (active.empty()) return out;
    if (!modular_oracle_in_scale(active.size(), m_cs)) {
        throw std::domain_error(
            "oracle_welfare_modular: instance beyond desk scale (|E| <= 8 or "
            "m_cs <= 30); use a heuristic policy for larger instances");
    }

    std::vector<int> need;
    std::vector<double> m_req;
    for (auto i : active) {
        need.push_back(need_modules(requests[i]));
        m_req.push_back(requests[i].m_req);
    }
    ModularDp dp{need, m_req, m_cs};
    std::vector<int> solution;

    switch (obj) {
        case WelfareObjective::MUW: {
            auto term = [&](std::size_t i, int m) -> WelfareAccum {
                return utility_modules(m, m_req[i]);
            };
            const auto g = dp.tables<WelfareAccum>(term, 0.0);
            solution = dp.reconstruct(g, term);
            break;
        }
        case WelfareObjective::MEW: {
            // Highest min-utility value whose per-EV module floors fit the
            // station, taken over the finite set of attainable utilities.
            std::vector<double> candidates = {0.0};
            for (std::size_t i = 0; i < need.size(); ++i) {
                for (int m = 1; m <= need[i]; ++m) {
                    candidates.push_back(utility_modules(m, m_req[i]));
                }
            }
            std::sort(candidates.begin(), candidates.end());
            candidates.erase(std::unique(candidates.begin(), candidates.end()),
                             candidates.end());

            auto floors_for = [&](double v) {
                std::vector<int> lo(need.size(), 0);
                for (std::size_t i = 0; i < need.size(); ++i) {
                    while (lo[i] <= need[i] &&
                           utility_modules(lo[i], m_req[i]) < v) {
                        ++lo[i];
                    }
                }
                return lo;
            };
            double best_v = 0.0;
            for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
                const auto lo = floors_for(*it);
                const long lo_sum = std::accumulate(lo.begin(), lo.end(), 0L);
                if (lo_sum <= m_cs) {
                    best_v = *it;
                    break;
                }
            }
            const auto lo = floors_for(best_v);

            // Among max-min optima, maximize total utility, then take the
            // lexicographically smallest vector.
            auto term = [&](std::size_t i, int m) -> WelfareAccum {
                return utility_modules(lo[i] + m, m_req[i]);
            };
            std::vector<int> slack_need(need.size());
            long lo_sum = 0;
            for (std::size_t i = 0; i < need.size(); ++i) {
                slack_need[i] = need[i] - lo[i];
                lo_sum += lo[i];
            }
            ModularDp slack_dp{slack_need, m_req,
                               static_cast<int>(m_cs - lo_sum)};
            const auto g = slack_dp.tables<WelfareAccum>(term, 0.0);
            solution = slack_dp.reconstruct(g, term);
            for (std::size_t i = 0; i < need.size(); ++i) solution[i] += lo[i];
            break;
        }
        case WelfareObjective::MNW: {
            auto term = [&](std::size_t i, int m) -> NashValue {
                if (m < 1) return {0, 0.0};
                return {1, std::log(utility_modules(m, m_req[i]))};
            };
            const auto g = dp.tables<NashValue>(term, NashValue{});
            solution = dp.reconstruct(g, term);
            break;
        }
    }

    for (std::size_t k = 0; k < active.size(); ++k) {
        out.alloc_modules[active[k]] = solution[k];
    }
    fill_kw_from_modules(out, p_mdl_kw);
    return out;
}

}  // namespace fcs
