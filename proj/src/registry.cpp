// SPDX-License-Identifier: Apache-2.0
#include "fcs/registry.hpp"

#include <sstream>
#include <stdexcept>

#include "fcs/allocators.hpp"

namespace fcs {

namespace {

CapacityView capacity_view(const PolicyInput& in) {
    return {in.arch, in.p_cs_kw, in.m_cs, in.p_mdl_kw, in.m_port};
}

SlotAllocation run_welfare(WelfareObjective obj, const PolicyInput& in) {
    if (in.arch == Architecture::Conventional) {
        return oracle_welfare_continuous(obj, in.p_cs_kw, in.requests);
    }
    return oracle_welfare_modular(obj, in.m_cs, in.requests, in.p_mdl_kw);
}

std::map<std::string, PolicyFn> build_registry() {
    std::map<std::string, PolicyFn> reg;
    reg["fair-opap"] = [](const PolicyInput& in) {
        if (in.arch == Architecture::Conventional) {
            return fair_opap_c(in.p_cs_kw, in.requests);
        }
        return fair_opap_m(in.m_cs, in.requests, in.socs,
                           {SortKind::MarginalGain, 0}, in.p_mdl_kw);
    };
    reg["es"] = [](const PolicyInput& in) {
        return alloc_es(capacity_view(in), in.requests);
    };
    reg["rep"] = [](const PolicyInput& in) {
        return alloc_rep(capacity_view(in), in.requests, in.ctx);
    };
    reg["cc"] = [](const PolicyInput& in) {
        return alloc_cc(capacity_view(in), in.requests, in.ctx);
    };
    reg["fcfs-smx"] = [](const PolicyInput& in) {
        return alloc_fcfs_smx(capacity_view(in), in.requests, in.ctx, 50.0);
    };
    reg["muw"] = [](const PolicyInput& in) {
        return run_welfare(WelfareObjective::MUW, in);
    };
    reg["mew"] = [](const PolicyInput& in) {
        return run_welfare(WelfareObjective::MEW, in);
    };
    reg["mnw"] = [](const PolicyInput& in) {
        return run_welfare(WelfareObjective::MNW, in);
    };
    return reg;
}

}  // namespace

const std::map<std::string, PolicyFn>& policy_registry() {
    static const std::map<std::string, PolicyFn> reg = build_registry();
    return reg;
}

std::vector<std::string> policy_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, fn] : policy_registry()) ids.push_back(id);
    return ids;
}

const PolicyFn& find_policy(const std::string& id) {
    const auto& reg = policy_registry();
    auto it = reg.find(id);
    if (it == reg.end()) {
        std::ostringstream os;
        os << "unknown policy '" << id << "'; registered policies:";
        for (const auto& [known, fn] : reg) os << " " << known;
        throw std::invalid_argument(os.str());
    }
    return it->second;
}

}  // namespace fcs
