// SPDX-License-Identifier: Apache-2.0
#ifndef FCS_IO_HPP
#define FCS_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcs/simulator.hpp"

namespace fcs::io {

using nlohmann::json;

// Charge-curve model files: one record per model with name, capacity_kwh,
// an optional sampling weight, and the soc/p_max breakpoint list.
struct ModelSet {
    std::vector<ChargeCurvePtr> models;
    std::vector<double> weights;
};

ModelSet models_from_json(const json& j);
json models_to_json(const std::vector<ChargeCurvePtr>& models,
                    const std::vector<double>& weights);
ModelSet load_models_file(const std::string& path);

/// Scenario files may inline their models under "ev_models" or point at a
/// sibling file via "ev_models_file".
ScenarioConfig scenario_from_json(const json& j, const std::string& base_dir);
json scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_scenario_file(const std::string& path);

/// Line-delimited trace serialization: one meta record, one record per
/// slot, one per session.
void write_trace(const ScenarioTrace& trace, std::ostream& out);
void write_trace_file(const ScenarioTrace& trace, const std::string& path);
ScenarioTrace read_trace(std::istream& in);
ScenarioTrace read_trace_file(const std::string& path);

/// Restores session profile curve pointers after parsing, using each
/// session's recorded model index.
void attach_curves(ScenarioTrace& trace, const std::vector<ChargeCurvePtr>& models);

/// Aggregates of one trace over its full-traffic regime: min/mean of the
/// per-slot scores plus the SoC envy-freeness curve over steady sessions.
struct TraceSummary {
    std::string policy_id;
    std::uint64_t seed = 0;
    Architecture arch = Architecture::Conventional;
    double cap_kw = 0.0;
    long sessions = 0;
    long steady_sessions = 0;
    double fairness_min = 1.0;  // envy-freeness or envy1-freeness by arch
    double fairness_mean = 1.0;
    double efficiency_min = 1.0;
    double efficiency_mean = 1.0;
    double utility_min = 1.0;
    double utility_mean = 1.0;
    std::vector<double> taus_minutes;
    std::vector<double> soc_envy_freeness;
};

TraceSummary summarize(const ScenarioTrace& trace,
                       const std::vector<double>& taus_minutes);

void write_summary_tsv(const std::vector<TraceSummary>& rows, std::ostream& out);
void write_bench_tsv(const std::vector<BenchRow>& rows, std::ostream& out);

inline const std::vector<double> kDefaultTausMinutes = {0.0,  15.0, 30.0, 45.0,
                                                        60.0, 75.0, 90.0};

/// One experiment batch: a scenario file fanned out over policies and seeds.
struct RunManifest {
    std::string scenario_path;
    std::vector<std::string> policies;
    std::vector<std::uint64_t> seeds;  // empty means the scenario's own seed
    std::string out_dir;
    std::vector<double> taus_minutes = kDefaultTausMinutes;
};

/// Runs every (policy, seed) pair, writes one trace file each plus a
/// summary table, and reports the written paths. Workers run concurrently;
/// outputs are joined in manifest order.
std::vector<std::string> run_manifest(const RunManifest& manifest,
                                      std::ostream& log);

}  // namespace fcs::io

#endif  // FCS_IO_HPP
