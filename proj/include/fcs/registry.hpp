// SPDX-License-Identifier: Apache-2.0
#ifndef FCS_REGISTRY_HPP
#define FCS_REGISTRY_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fcs/baselines.hpp"
#include "fcs/core.hpp"

namespace fcs {

/// Everything a per-slot policy call may consume. Vectors are index-aligned
/// with `requests`.
struct PolicyInput {
    Architecture arch = Architecture::Conventional;
    long slot = 0;
    double p_cs_kw = 0.0;
    int m_cs = 0;
    double p_mdl_kw = 0.0;
    int m_port = 0;
    double p_port_kw = 0.0;
    std::vector<PowerRequest> requests;
    std::vector<double> socs;
    SessionContext ctx;
};

using PolicyFn = std::function<SlotAllocation(const PolicyInput&)>;

/// Registered policies: fair-opap, es, rep, cc, fcfs-smx, muw, mew, mnw.
const std::map<std::string, PolicyFn>& policy_registry();

std::vector<std::string> policy_ids();

/// Looks up a policy; throws std::invalid_argument listing the known ids.
const PolicyFn& find_policy(const std::string& id);

}  // namespace fcs

#endif  // FCS_REGISTRY_HPP
