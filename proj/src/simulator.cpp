// SPDX-License-Identifier: Apache-2.0
#include "fcs/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fcs/allocators.hpp"

namespace fcs {

namespace {

// All scenario randomness flows through this generator: raw mt19937_64 bits
// mapped to [0, 1) the same way on every platform.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg) {
    auto violations = validate_station(cfg.station);
    if (cfg.n_arrivals < 0) violations.push_back("n_arrivals must be >= 0");
    if (cfg.ev_models.empty()) violations.push_back("at least one EV model is required");
    if (!cfg.model_weights.empty()) {
        if (cfg.model_weights.size() != cfg.ev_models.size()) {
            violations.push_back("model_weights must match ev_models in length");
        }
        for (double w : cfg.model_weights) {
            if (w < 0.0) {
                violations.push_back("model weights must be >= 0");
                break;
            }
        }
    }
    for (const auto& model : cfg.ev_models) {
        for (const auto& v : model->validate()) {
            violations.push_back("model '" + model->model_name + "': " + v);
        }
    }
    if (cfg.init_soc_lo > cfg.init_soc_hi) {
        violations.push_back("init_soc range is inverted");
    }
    if (cfg.init_soc_lo < 0.0 || cfg.init_soc_hi > 1.0) {
        violations.push_back("init_soc range must lie in [0, 1]");
    }
    if (cfg.target_soc <= cfg.init_soc_hi) {
        violations.push_back("target_soc must exceed the initial-SoC upper bound");
    }
    if (cfg.target_soc > 1.0) violations.push_back("target_soc must be <= 1");
    if (cfg.plugin_buffer_min < 0.0) {
        violations.push_back("plugin_buffer_min must be >= 0");
    }
    return violations;
}

std::vector<EvDraw> sample_arrivals(const ScenarioConfig& cfg) {
    std::mt19937_64 rng(cfg.rng_seed);
    std::vector<double> cumulative;
    double total = 0.0;
    for (std::size_t m = 0; m < cfg.ev_models.size(); ++m) {
        total += cfg.model_weights.empty() ? 1.0 : cfg.model_weights[m];
        cumulative.push_back(total);
    }
    std::vector<EvDraw> draws;
    draws.reserve(cfg.n_arrivals);
    for (int i = 0; i < cfg.n_arrivals; ++i) {
        const double u = uniform01(rng) * total;
        const std::size_t model =
            std::lower_bound(cumulative.begin(), cumulative.end(), u) -
            cumulative.begin();
        EvDraw d;
        d.model_index = static_cast<int>(std::min(model, cfg.ev_models.size() - 1));
        d.init_soc = cfg.init_soc_lo +
                     (cfg.init_soc_hi - cfg.init_soc_lo) * uniform01(rng);
        draws.push_back(d);
    }
    return draws;
}

CapSchedule make_cap_schedule(double base_kw, double curtail_fraction,
                              double curtail_at_min, double recover_over_min) {
    CapSchedule s;
    s.base_kw = base_kw;
    s.curtail_fraction = curtail_fraction;
    s.curtail_at_min = curtail_at_min;
    s.recover_over_min = recover_over_min;
    return s;
}

namespace {

struct ActiveSession {
    EvState ev;
    SessionRecord record;
};

}  // namespace

ScenarioTrace run_scenario(const ScenarioConfig& cfg) {
    {
        const auto violations = validate_scenario(cfg);
        if (!violations.empty()) {
            std::ostringstream os;
            os << "invalid scenario:";
            for (const auto& v : violations) os << "\n  - " << v;
            throw std::invalid_argument(os.str());
        }
    }
    const auto& policy = find_policy(cfg.policy_id);
    const auto& st = cfg.station;
    const bool modular = st.architecture == Architecture::Modular;

    ScenarioTrace trace;
    trace.policy_id = cfg.policy_id;
    trace.seed = cfg.rng_seed;
    trace.arch = st.architecture;
    trace.delta_t_min = st.delta_t_min;
    trace.p_port_kw = st.p_port_kw;
    trace.target_soc = cfg.target_soc;
    if (cfg.n_arrivals == 0) return trace;

    const auto draws = sample_arrivals(cfg);
    const long buffer_slots =
        std::llround(cfg.plugin_buffer_min / st.delta_t_min);

    std::vector<std::optional<ActiveSession>> ports(st.n_port);
    std::vector<long> port_ready_at(st.n_port, 0);  // earliest connect slot
    int next_arrival = 0;
    int completed = 0;
    long first_unreplaced_departure = -1;

    auto connect = [&](int port, long slot) {
        const auto& draw = draws[next_arrival];
        ActiveSession s;
        s.ev.ev_id = next_arrival;
        s.ev.curve = cfg.ev_models[draw.model_index];
        s.ev.soc = draw.init_soc;
        s.ev.arrival_slot = slot;
        s.ev.port = port;
        s.record.ev_id = next_arrival;
        s.record.model_index = draw.model_index;
        s.record.model_name = s.ev.curve->model_name;
        s.record.capacity_kwh = s.ev.curve->capacity_kwh;
        s.record.connect_slot = slot;
        s.record.initial_soc = draw.init_soc;
        s.record.profile.ev_id = next_arrival;
        s.record.profile.connect_slot = slot;
        s.record.profile.initial_soc = draw.init_soc;
        s.record.profile.target_soc = cfg.target_soc;
        s.record.profile.delta_t_min = st.delta_t_min;
        s.record.profile.p_port_kw = st.p_port_kw;
        s.record.profile.curve = s.ev.curve;
        ports[port] = std::move(s);
        ++next_arrival;
    };

    const long slot_budget = 100000L + static_cast<long>(cfg.n_arrivals) * 4000L;
    for (long slot = 0;; ++slot) {
        if (slot > slot_budget) {
            throw std::runtime_error(
                "scenario exceeded the slot budget; check that every model's "
                "charge curve stays positive below the target SoC");
        }

        for (int port = 0; port < st.n_port; ++port) {
            if (!ports[port] && next_arrival < cfg.n_arrivals &&
                port_ready_at[port] <= slot) {
                connect(port, slot);
            }
        }

        std::vector<int> connected_ports;
        for (int port = 0; port < st.n_port; ++port) {
            if (ports[port]) connected_ports.push_back(port);
        }
        if (connected_ports.empty()) {
            if (completed == cfg.n_arrivals) break;
            continue;  // every port is inside a plug-in buffer
        }

        PolicyInput in;
        in.arch = st.architecture;
        in.slot = slot;
        in.p_cs_kw = st.cap.power_at_slot(slot, st.delta_t_min);
        in.m_cs = modular ? st.modules_available_at_slot(slot) : 0;
        in.p_mdl_kw = st.p_mdl_kw;
        in.m_port = st.m_port;
        in.p_port_kw = st.p_port_kw;
        for (int port : connected_ports) {
            const auto& s = *ports[port];
            in.requests.push_back(compute_request(s.ev, st));
            in.socs.push_back(s.ev.soc);
            in.ctx.arrival_index.push_back(s.ev.ev_id);
            in.ctx.remaining_energy_kwh.push_back(
                std::max(0.0, (cfg.target_soc - s.ev.soc) * s.ev.curve->capacity_kwh));
            in.ctx.soc.push_back(s.ev.soc);
            in.ctx.charged_kwh.push_back(s.record.energy_kwh);
        }

        SlotRecord rec;
        rec.slot = slot;
        rec.p_cs_kw = in.p_cs_kw;
        rec.m_cs = in.m_cs;
        rec.allocation = policy(in);
        rec.allocation.slot = slot;
        rec.allocation.policy_id = cfg.policy_id;

        const auto violation =
            modular ? check_feasible_modular(rec.allocation, st.m_port, in.m_cs,
                                             st.p_mdl_kw)
                    : check_feasible_conventional(rec.allocation, st.p_port_kw,
                                                  in.p_cs_kw);
        if (violation) {
            std::ostringstream os;
            os << "policy '" << cfg.policy_id << "' produced an infeasible "
               << "allocation at slot " << slot << ": " << *violation;
            throw std::runtime_error(os.str());
        }
        rec.scores = score_slot(rec.allocation, st.architecture, in.p_cs_kw);

        for (std::size_t k = 0; k < connected_ports.size(); ++k) {
            const int port = connected_ports[k];
            auto& s = *ports[port];
            const auto step = apply_power(s.ev, rec.allocation.alloc_kw[k],
                                          st.delta_t_min, st.p_port_kw);
            s.ev = step.state;
            rec.delivered_kw += step.delivered_kw;
            s.record.energy_kwh += step.delivered_kw * (st.delta_t_min / 60.0);
            s.record.profile.alloc_kw.push_back(rec.allocation.alloc_kw[k]);
            s.record.profile.soc_after.push_back(s.ev.soc);
        }
        trace.slots.push_back(std::move(rec));

        for (int port : connected_ports) {
            auto& s = *ports[port];
            if (s.ev.soc < cfg.target_soc) continue;
            s.record.depart_slot = slot;
            s.record.final_soc = s.ev.soc;
            trace.sessions.push_back(std::move(s.record));
            ports[port].reset();
            ++completed;
            if (next_arrival < cfg.n_arrivals) {
                port_ready_at[port] = slot + 1 + buffer_slots;
            } else if (first_unreplaced_departure < 0) {
                first_unreplaced_departure = slot;
            }
        }
        if (completed == cfg.n_arrivals) break;
    }

    trace.steady_end_slot = first_unreplaced_departure >= 0
                                ? first_unreplaced_departure
                                : (trace.slots.empty() ? -1 : trace.slots.back().slot);
    for (auto& session : trace.sessions) {
        session.steady = session.depart_slot <= trace.steady_end_slot;
    }
    std::sort(trace.sessions.begin(), trace.sessions.end(),
              [](const SessionRecord& a, const SessionRecord& b) {
                  return a.ev_id < b.ev_id;
              });
    return trace;
}

std::vector<BenchRow> runtime_bench(const std::vector<std::string>& ids, int n_max,
                                    int repeats, std::uint64_t seed) {
    std::vector<BenchRow> rows;
    std::mt19937_64 rng(seed);
    const double p_port = 100.0;
    const double p_mdl = 25.0;
    const int m_port = 4;

    for (const auto& id : ids) {
        const auto& policy = find_policy(id);
        for (int n = 1; n <= n_max; ++n) {
            PolicyInput in;
            in.p_port_kw = p_port;
            in.p_mdl_kw = p_mdl;
            in.m_port = m_port;
            in.p_cs_kw = 0.4 * n * p_port;
            in.m_cs = static_cast<int>(std::floor(in.p_cs_kw / p_mdl));
            for (int i = 0; i < n; ++i) {
                const double req = 1.0 + 99.0 * uniform01(rng);
                in.requests.push_back({i, req, req / p_mdl});
                in.socs.push_back(0.9 * uniform01(rng));
                in.ctx.arrival_index.push_back(i);
                in.ctx.remaining_energy_kwh.push_back(80.0 * uniform01(rng));
                in.ctx.soc.push_back(in.socs.back());
                in.ctx.charged_kwh.push_back(60.0 * uniform01(rng));
            }

            BenchRow row;
            row.policy_id = id;
            row.n_evs = n;
            auto time_arch = [&](Architecture arch, double& median_us,
                                 std::string& note) {
                const bool welfare = id == "muw" || id == "mew" || id == "mnw";
                if (arch == Architecture::Modular && welfare &&
                    !modular_oracle_in_scale(in.requests.size(), in.m_cs)) {
                    median_us = -1.0;
                    note = "skipped: desk-scale limit";
                    return;
                }
                in.arch = arch;
                std::vector<double> samples;
                policy(in);  // warm-up
                for (int r = 0; r < repeats; ++r) {
                    const auto t0 = std::chrono::steady_clock::now();
                    policy(in);
                    const auto t1 = std::chrono::steady_clock::now();
                    samples.push_back(
                        std::chrono::duration<double, std::micro>(t1 - t0).count());
                }
                std::sort(samples.begin(), samples.end());
                median_us = samples[samples.size() / 2];
            };
            time_arch(Architecture::Conventional, row.conventional_us,
                      row.conventional_note);
            time_arch(Architecture::Modular, row.modular_us, row.modular_note);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace fcs
