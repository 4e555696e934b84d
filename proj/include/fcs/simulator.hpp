// SPDX-License-Identifier: Apache-2.0
#ifndef FCS_SIMULATOR_HPP
#define FCS_SIMULATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fcs/core.hpp"
#include "fcs/metrics.hpp"
#include "fcs/registry.hpp"

namespace fcs {

/// A full experiment description: station, EV population, arrival process,
/// and the policy driving the allocation.
struct ScenarioConfig {
    StationConfig station;
    int n_arrivals = 0;
    std::vector<ChargeCurvePtr> ev_models;
    std::vector<double> model_weights;  // empty means uniform
    double init_soc_lo = 0.08;
    double init_soc_hi = 0.20;
    double target_soc = 0.90;
    double plugin_buffer_min = 3.0;
    std::uint64_t rng_seed = 42;
    std::string policy_id = "fair-opap";
};

std::vector<std::string> validate_scenario(const ScenarioConfig& cfg);

struct SlotRecord {
    long slot = 0;
    double p_cs_kw = 0.0;
    int m_cs = 0;  // modular budget this slot; 0 for conventional stations
    SlotAllocation allocation;
    SlotScores scores;
    double delivered_kw = 0.0;
};

struct SessionRecord {
    int ev_id = 0;             // arrival order index
    int model_index = 0;
    std::string model_name;
    double capacity_kwh = 0.0;
    long connect_slot = 0;
    long depart_slot = 0;
    double initial_soc = 0.0;
    double final_soc = 0.0;
    double energy_kwh = 0.0;
    bool steady = true;  // departed while arrivals were still queued
    ProfileRecord profile;
};

struct ScenarioTrace {
    std::string policy_id;
    std::uint64_t seed = 0;
    Architecture arch = Architecture::Conventional;
    double delta_t_min = kDefaultSlotMinutes;
    double p_port_kw = 0.0;
    double target_soc = 0.9;
    long steady_end_slot = -1;  // last slot of the full-traffic regime
    std::vector<SlotRecord> slots;
    std::vector<SessionRecord> sessions;
};

/// Runs one scenario to completion: ports fill at slot 0, each departure
/// hands its port to the next queued EV after the plug-in buffer, and the
/// run ends when every arrival has charged to the target. Deterministic in
/// the scenario seed; the sampled EV population does not depend on the
/// policy. Throws std::runtime_error if a policy emits an infeasible
/// allocation.
ScenarioTrace run_scenario(const ScenarioConfig& cfg);

/// Pre-sampled EV attributes, drawn once from the seed before simulation.
struct EvDraw {
    int model_index = 0;
    double init_soc = 0.0;
};

std::vector<EvDraw> sample_arrivals(const ScenarioConfig& cfg);

CapSchedule make_cap_schedule(double base_kw, double curtail_fraction,
                              double curtail_at_min, double recover_over_min);

struct BenchRow {
    std::string policy_id;
    int n_evs = 0;
    double conventional_us = -1.0;  // negative when skipped
    double modular_us = -1.0;
    std::string conventional_note;
    std::string modular_note;
};

/// Times one allocation call per (policy, EV count) on synthetic instances
/// with the station cap at 40% of total port rating; reports the median of
/// `repeats` runs in microseconds. Modular welfare oracles are skipped with
/// a note beyond their instance bound.
std::vector<BenchRow> runtime_bench(const std::vector<std::string>& ids, int n_max,
                                    int repeats, std::uint64_t seed);

}  // namespace fcs

#endif  // FCS_SIMULATOR_HPP
