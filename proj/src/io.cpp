// SPDX-License-Identifier: Apache-2.0
#include "fcs/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

namespace fcs::io {

namespace {

namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::runtime_error(where + ": " + what);
}

const json& expect(const json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where, "missing field '" + key + "'");
    return *it;
}

double num(const json& j, const std::string& key, const std::string& where) {
    const json& v = expect(j, key, where);
    if (!v.is_number()) fail(where, "field '" + key + "' must be numeric");
    return v.get<double>();
}

double num_or(const json& j, const std::string& key, double fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : it->get<double>();
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

ModelSet models_from_json(const json& j) {
    const std::string where = "models";
    ModelSet set;
    const json& list = expect(j, "models", where);
    if (!list.is_array() || list.empty()) fail(where, "'models' must be a non-empty array");
    for (const auto& entry : list) {
        auto curve = std::make_shared<ChargeCurve>();
        curve->model_name = expect(entry, "name", where).get<std::string>();
        curve->capacity_kwh = num(entry, "capacity_kwh", where);
        const json& pts = expect(entry, "curve", where);
        for (const auto& p : pts) {
            if (!p.is_array() || p.size() != 2) {
                fail(where, "curve breakpoints must be [soc, p_max_kw] pairs");
            }
            curve->points.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        const auto violations = curve->validate();
        if (!violations.empty()) {
            fail(where, "model '" + curve->model_name + "': " + violations.front());
        }
        set.weights.push_back(num_or(entry, "weight", 1.0));
        set.models.push_back(std::move(curve));
    }
    return set;
}

json models_to_json(const std::vector<ChargeCurvePtr>& models,
                    const std::vector<double>& weights) {
    json list = json::array();
    for (std::size_t i = 0; i < models.size(); ++i) {
        json entry;
        entry["name"] = models[i]->model_name;
        entry["capacity_kwh"] = models[i]->capacity_kwh;
        entry["weight"] = weights.empty() ? 1.0 : weights[i];
        json pts = json::array();
        for (const auto& p : models[i]->points) {
            pts.push_back(json::array({p.soc, p.p_max_kw}));
        }
        entry["curve"] = std::move(pts);
        list.push_back(std::move(entry));
    }
    return json{{"models", std::move(list)}};
}

ModelSet load_models_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("models", "cannot open '" + path + "'");
    json j;
    in >> j;
    return models_from_json(j);
}

ScenarioConfig scenario_from_json(const json& j, const std::string& base_dir) {
    const std::string where = "scenario";
    ScenarioConfig cfg;

    const json& st = expect(j, "station", where);
    const std::string arch_str =
        expect(st, "architecture", where + ".station").get<std::string>();
    const auto arch = architecture_from_string(arch_str);
    if (!arch) fail(where, "unknown architecture '" + arch_str + "'");
    cfg.station.architecture = *arch;
    cfg.station.n_port = static_cast<int>(num(st, "n_port", where + ".station"));
    cfg.station.p_port_kw = num(st, "p_port_kw", where + ".station");
    cfg.station.delta_t_min = num_or(st, "delta_t_min", kDefaultSlotMinutes);
    if (cfg.station.architecture == Architecture::Modular) {
        cfg.station.p_mdl_kw = num(st, "p_mdl_kw", where + ".station");
        cfg.station.m_port = static_cast<int>(num(st, "m_port", where + ".station"));
        cfg.station.m_cs = static_cast<int>(num(st, "m_cs", where + ".station"));
    }
    const json& cap = expect(st, "cap", where + ".station");
    cfg.station.cap.base_kw = num(cap, "base_kw", where + ".station.cap");
    cfg.station.cap.curtail_fraction = num_or(cap, "curtail_fraction", 0.0);
    cfg.station.cap.curtail_at_min = num_or(cap, "curtail_at_min", 0.0);
    cfg.station.cap.recover_over_min = num_or(cap, "recover_over_min", 0.0);

    cfg.n_arrivals = static_cast<int>(num(j, "n_arrivals", where));
    if (j.contains("ev_models")) {
        auto set = models_from_json(json{{"models", j.at("ev_models")}});
        cfg.ev_models = std::move(set.models);
        cfg.model_weights = std::move(set.weights);
    } else if (j.contains("ev_models_file")) {
        const fs::path rel = j.at("ev_models_file").get<std::string>();
        const fs::path resolved = rel.is_absolute() ? rel : fs::path(base_dir) / rel;
        auto set = load_models_file(resolved.string());
        cfg.ev_models = std::move(set.models);
        cfg.model_weights = std::move(set.weights);
    } else {
        fail(where, "one of 'ev_models' or 'ev_models_file' is required");
    }

    const json& soc_range = expect(j, "init_soc_range", where);
    if (!soc_range.is_array() || soc_range.size() != 2) {
        fail(where, "'init_soc_range' must be [lo, hi]");
    }
    cfg.init_soc_lo = soc_range[0].get<double>();
    cfg.init_soc_hi = soc_range[1].get<double>();
    cfg.target_soc = num(j, "target_soc", where);
    cfg.plugin_buffer_min = num_or(j, "plugin_buffer_min", 3.0);
    cfg.rng_seed = expect(j, "rng_seed", where).get<std::uint64_t>();
    cfg.policy_id = j.value("policy_id", std::string("fair-opap"));
    return cfg;
}

json scenario_to_json(const ScenarioConfig& cfg) {
    json st;
    st["architecture"] = to_string(cfg.station.architecture);
    st["n_port"] = cfg.station.n_port;
    st["p_port_kw"] = cfg.station.p_port_kw;
    st["delta_t_min"] = cfg.station.delta_t_min;
    if (cfg.station.architecture == Architecture::Modular) {
        st["p_mdl_kw"] = cfg.station.p_mdl_kw;
        st["m_port"] = cfg.station.m_port;
        st["m_cs"] = cfg.station.m_cs;
    }
    st["cap"] = {{"base_kw", cfg.station.cap.base_kw},
                 {"curtail_fraction", cfg.station.cap.curtail_fraction},
                 {"curtail_at_min", cfg.station.cap.curtail_at_min},
                 {"recover_over_min", cfg.station.cap.recover_over_min}};

    json j;
    j["station"] = std::move(st);
    j["n_arrivals"] = cfg.n_arrivals;
    j["ev_models"] = models_to_json(cfg.ev_models, cfg.model_weights).at("models");
    j["init_soc_range"] = json::array({cfg.init_soc_lo, cfg.init_soc_hi});
    j["target_soc"] = cfg.target_soc;
    j["plugin_buffer_min"] = cfg.plugin_buffer_min;
    j["rng_seed"] = cfg.rng_seed;
    j["policy_id"] = cfg.policy_id;
    return j;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("scenario", "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail("scenario '" + path + "'", e.what());
    }
    return scenario_from_json(j, fs::path(path).parent_path().string());
}

void write_trace(const ScenarioTrace& trace, std::ostream& out) {
    json meta;
    meta["type"] = "meta";
    meta["policy_id"] = trace.policy_id;
    meta["seed"] = trace.seed;
    meta["architecture"] = to_string(trace.arch);
    meta["delta_t_min"] = trace.delta_t_min;
    meta["p_port_kw"] = trace.p_port_kw;
    meta["target_soc"] = trace.target_soc;
    meta["steady_end_slot"] = trace.steady_end_slot;
    out << meta.dump() << "\n";

    for (const auto& s : trace.slots) {
        json rec;
        rec["type"] = "slot";
        rec["slot"] = s.slot;
        rec["p_cs_kw"] = s.p_cs_kw;
        rec["m_cs"] = s.m_cs;
        json ev = json::array();
        json p_req = json::array();
        json m_req = json::array();
        for (const auto& r : s.allocation.requests) {
            ev.push_back(r.ev_id);
            p_req.push_back(r.p_req_kw);
            m_req.push_back(r.m_req);
        }
        rec["ev"] = std::move(ev);
        rec["p_req_kw"] = std::move(p_req);
        rec["m_req"] = std::move(m_req);
        rec["alloc_kw"] = s.allocation.alloc_kw;
        rec["alloc_m"] = s.allocation.alloc_modules;
        rec["delivered_kw"] = s.delivered_kw;
        rec["envy_freeness"] = s.scores.envy_freeness;
        rec["envy1_freeness"] = s.scores.envy1_freeness;
        rec["efficiency"] = s.scores.efficiency;
        rec["utilities"] = s.scores.utilities;
        out << rec.dump() << "\n";
    }

    for (const auto& s : trace.sessions) {
        json rec;
        rec["type"] = "session";
        rec["ev"] = s.ev_id;
        rec["model_index"] = s.model_index;
        rec["model"] = s.model_name;
        rec["capacity_kwh"] = s.capacity_kwh;
        rec["connect_slot"] = s.connect_slot;
        rec["depart_slot"] = s.depart_slot;
        rec["initial_soc"] = s.initial_soc;
        rec["final_soc"] = s.final_soc;
        rec["energy_kwh"] = s.energy_kwh;
        rec["steady"] = s.steady;
        rec["alloc_kw"] = s.profile.alloc_kw;
        rec["soc_after"] = s.profile.soc_after;
        out << rec.dump() << "\n";
    }
}

void write_trace_file(const ScenarioTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("trace", "cannot write '" + path + "'");
    write_trace(trace, out);
}

ScenarioTrace read_trace(std::istream& in) {
    ScenarioTrace trace;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            fail("trace line " + std::to_string(line_no), e.what());
        }
        const std::string type = rec.value("type", "");
        if (type == "meta") {
            trace.policy_id = rec.at("policy_id").get<std::string>();
            trace.seed = rec.at("seed").get<std::uint64_t>();
            trace.arch = *architecture_from_string(rec.at("architecture"));
            trace.delta_t_min = rec.at("delta_t_min").get<double>();
            trace.p_port_kw = rec.at("p_port_kw").get<double>();
            trace.target_soc = rec.at("target_soc").get<double>();
            trace.steady_end_slot = rec.at("steady_end_slot").get<long>();
        } else if (type == "slot") {
            SlotRecord s;
            s.slot = rec.at("slot").get<long>();
            s.p_cs_kw = rec.at("p_cs_kw").get<double>();
            s.m_cs = rec.at("m_cs").get<int>();
            const auto& ev = rec.at("ev");
            const auto& p_req = rec.at("p_req_kw");
            const auto& m_req = rec.at("m_req");
            for (std::size_t i = 0; i < ev.size(); ++i) {
                s.allocation.requests.push_back({ev[i].get<int>(),
                                                 p_req[i].get<double>(),
                                                 m_req[i].get<double>()});
            }
            s.allocation.slot = s.slot;
            s.allocation.policy_id = trace.policy_id;
            s.allocation.alloc_kw = rec.at("alloc_kw").get<std::vector<double>>();
            s.allocation.alloc_modules = rec.at("alloc_m").get<std::vector<int>>();
            s.delivered_kw = rec.at("delivered_kw").get<double>();
            s.scores.envy_freeness = rec.at("envy_freeness").get<double>();
            s.scores.envy1_freeness = rec.at("envy1_freeness").get<double>();
            s.scores.efficiency = rec.at("efficiency").get<double>();
            s.scores.utilities = rec.at("utilities").get<std::vector<double>>();
            trace.slots.push_back(std::move(s));
        } else if (type == "session") {
            SessionRecord s;
            s.ev_id = rec.at("ev").get<int>();
            s.model_index = rec.at("model_index").get<int>();
            s.model_name = rec.at("model").get<std::string>();
            s.capacity_kwh = rec.at("capacity_kwh").get<double>();
            s.connect_slot = rec.at("connect_slot").get<long>();
            s.depart_slot = rec.at("depart_slot").get<long>();
            s.initial_soc = rec.at("initial_soc").get<double>();
            s.final_soc = rec.at("final_soc").get<double>();
            s.energy_kwh = rec.at("energy_kwh").get<double>();
            s.steady = rec.at("steady").get<bool>();
            s.profile.ev_id = s.ev_id;
            s.profile.connect_slot = s.connect_slot;
            s.profile.initial_soc = s.initial_soc;
            s.profile.alloc_kw = rec.at("alloc_kw").get<std::vector<double>>();
            s.profile.soc_after = rec.at("soc_after").get<std::vector<double>>();
            trace.sessions.push_back(std::move(s));
        } else {
            fail("trace line " + std::to_string(line_no),
                 "unknown record type '" + type + "'");
        }
    }
    for (auto& s : trace.sessions) {
        s.profile.target_soc = trace.target_soc;
        s.profile.delta_t_min = trace.delta_t_min;
        s.profile.p_port_kw = trace.p_port_kw;
    }
    return trace;
}

ScenarioTrace read_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("trace", "cannot open '" + path + "'");
    return read_trace(in);
}

void attach_curves(ScenarioTrace& trace, const std::vector<ChargeCurvePtr>& models) {
    for (auto& s : trace.sessions) {
        if (s.model_index < 0 ||
            s.model_index >= static_cast<int>(models.size())) {
            fail("trace", "session model index out of range");
        }
        s.profile.curve = models[s.model_index];
    }
}

TraceSummary summarize(const ScenarioTrace& trace,
                       const std::vector<double>& taus_minutes) {
    TraceSummary out;
    out.policy_id = trace.policy_id;
    out.seed = trace.seed;
    out.arch = trace.arch;
    out.taus_minutes = taus_minutes;
    out.sessions = static_cast<long>(trace.sessions.size());

    double fair_sum = 0.0;
    double eff_sum = 0.0;
    double util_sum = 0.0;
    long slot_count = 0;
    long util_count = 0;
    for (const auto& s : trace.slots) {
        out.cap_kw = std::max(out.cap_kw, s.p_cs_kw);
        if (s.slot > trace.steady_end_slot) continue;
        const double fairness = trace.arch == Architecture::Conventional
                                    ? s.scores.envy_freeness
                                    : s.scores.envy1_freeness;
        out.fairness_min = std::min(out.fairness_min, fairness);
        out.efficiency_min = std::min(out.efficiency_min, s.scores.efficiency);
        fair_sum += fairness;
        eff_sum += s.scores.efficiency;
        ++slot_count;
        for (double u : s.scores.utilities) {
            out.utility_min = std::min(out.utility_min, u);
            util_sum += u;
            ++util_count;
        }
    }
    if (slot_count > 0) {
        out.fairness_mean = fair_sum / static_cast<double>(slot_count);
        out.efficiency_mean = eff_sum / static_cast<double>(slot_count);
    }
    if (util_count > 0) {
        out.utility_mean = util_sum / static_cast<double>(util_count);
    }

    std::vector<ProfileRecord> steady_profiles;
    for (const auto& s : trace.sessions) {
        if (s.steady) steady_profiles.push_back(s.profile);
    }
    out.steady_sessions = static_cast<long>(steady_profiles.size());
    out.soc_envy_freeness = soc_envy_freeness_curve(steady_profiles, taus_minutes);
    return out;
}

void write_summary_tsv(const std::vector<TraceSummary>& rows, std::ostream& out) {
    out << "policy\tseed\tarchitecture\tcap_kw\tsessions\tsteady_sessions"
        << "\tfairness_min\tfairness_mean\tefficiency_min\tefficiency_mean"
        << "\tutility_min\tutility_mean";
    if (!rows.empty()) {
        for (double tau : rows.front().taus_minutes) {
            out << "\tsocef_" << format_number(tau) << "min";
        }
    }
    out << "\n";
    for (const auto& r : rows) {
        out << r.policy_id << "\t" << r.seed << "\t" << to_string(r.arch) << "\t"
            << format_number(r.cap_kw) << "\t" << r.sessions << "\t"
            << r.steady_sessions << "\t" << format_number(r.fairness_min) << "\t"
            << format_number(r.fairness_mean) << "\t"
            << format_number(r.efficiency_min) << "\t"
            << format_number(r.efficiency_mean) << "\t"
            << format_number(r.utility_min) << "\t"
            << format_number(r.utility_mean);
        for (double s : r.soc_envy_freeness) out << "\t" << format_number(s);
        out << "\n";
    }
}

void write_bench_tsv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "policy\tn_evs\tconventional_us\tmodular_us\n";
    for (const auto& r : rows) {
        out << r.policy_id << "\t" << r.n_evs << "\t";
        if (r.conventional_us < 0.0) {
            out << r.conventional_note;
        } else {
            out << format_number(r.conventional_us);
        }
        out << "\t";
        if (r.modular_us < 0.0) {
            out << r.modular_note;
        } else {
            out << format_number(r.modular_us);
        }
        out << "\n";
    }
}

std::vector<std::string> run_manifest(const RunManifest& manifest,
                                      std::ostream& log) {
    if (manifest.policies.empty()) {
        throw std::invalid_argument("manifest needs at least one policy");
    }
    const auto base = load_scenario_file(manifest.scenario_path);
    {
        const auto violations = validate_scenario(base);
        if (!violations.empty()) {
            std::ostringstream os;
            os << "invalid scenario:";
            for (const auto& v : violations) os << "\n  - " << v;
            throw std::invalid_argument(os.str());
        }
        for (double tau : manifest.taus_minutes) {
            const double slots = tau / base.station.delta_t_min;
            if (tau < 0.0 || std::abs(slots - std::llround(slots)) > 1e-9) {
                throw std::invalid_argument(
                    "taus must be non-negative multiples of delta_t");
            }
        }
    }
    for (const auto& policy : manifest.policies) {
        find_policy(policy);  // fail fast on unknown ids
    }

    const auto seeds = manifest.seeds.empty()
                           ? std::vector<std::uint64_t>{base.rng_seed}
                           : manifest.seeds;
    fs::create_directories(manifest.out_dir);

    struct Job {
        std::string policy;
        std::uint64_t seed;
        std::future<ScenarioTrace> result;
    };
    std::vector<Job> jobs;
    for (const auto& policy : manifest.policies) {
        for (const auto seed : seeds) {
            ScenarioConfig cfg = base;
            cfg.policy_id = policy;
            cfg.rng_seed = seed;
            jobs.push_back({policy, seed,
                            std::async(std::launch::async,
                                       [cfg] { return run_scenario(cfg); })});
        }
    }

    std::vector<std::string> written;
    std::vector<TraceSummary> summaries;
    for (auto& job : jobs) {
        auto trace = job.result.get();
        const fs::path path = fs::path(manifest.out_dir) /
                              ("trace_" + job.policy + "_seed" +
                               std::to_string(job.seed) + ".jsonl");
        write_trace_file(trace, path.string());
        written.push_back(path.string());
        summaries.push_back(summarize(trace, manifest.taus_minutes));
        log << "wrote " << path.string() << " (" << trace.slots.size()
            << " slots, " << trace.sessions.size() << " sessions)\n";
    }

    const fs::path summary_path = fs::path(manifest.out_dir) / "summary.tsv";
    std::ofstream summary_out(summary_path, std::ios::binary);
    if (!summary_out) fail("summary", "cannot write '" + summary_path.string() + "'");
    write_summary_tsv(summaries, summary_out);
    written.push_back(summary_path.string());
    log << "wrote " << summary_path.string() << "\n";
    return written;
}

}  // namespace fcs::io
