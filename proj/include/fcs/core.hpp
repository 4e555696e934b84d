// SPDX-License-Identifier: Apache-2.0
#ifndef FCS_CORE_HPP
#define FCS_CORE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fcs {

/// Comparison tolerance for real-valued power/feasibility checks (kW).
inline constexpr double kPowerEps = 1e-9;

/// Default slot duration (minutes).
inline constexpr double kDefaultSlotMinutes = 0.5;

enum class Architecture { Conventional, Modular };

std::string to_string(Architecture arch);
std::optional<Architecture> architecture_from_string(const std::string& s);

/// Station power cap over time: constant, or a step curtailment followed
/// by a linear ramp back to the base value.
struct CapSchedule {
    double base_kw = 0.0;
    double curtail_fraction = 0.0;  // 0 => constant schedule
    double curtail_at_min = 0.0;
    double recover_over_min = 0.0;

    double power_at_minutes(double minutes) const;
    double power_at_slot(long slot, double delta_t_min) const;
    double max_kw() const { return base_kw; }
};

struct StationConfig {
    Architecture architecture = Architecture::Conventional;
    int n_port = 0;
    double p_port_kw = 0.0;
    double p_mdl_kw = 0.0;  // modular only
    int m_port = 0;         // modular only
    int m_cs = 0;           // modular only
    CapSchedule cap;
    double delta_t_min = kDefaultSlotMinutes;

    /// Modular cap for one slot: min(m_cs, floor(p_cs_t / p_mdl)).
    int modules_available_at_slot(long slot) const;
};

/// All violated station invariants; empty means the config is valid.
std::vector<std::string> validate_station(const StationConfig& cfg);

struct CurvePoint {
    double soc = 0.0;
    double p_max_kw = 0.0;
};

/// Piecewise-linear maximum-acceptance curve of one EV model over SoC.
/// Breakpoints are strictly increasing, starting at 0 and ending at 1.
struct ChargeCurve {
    std::string model_name;
    double capacity_kwh = 0.0;
    std::vector<CurvePoint> points;

    std::vector<std::string> validate() const;
};

using ChargeCurvePtr = std::shared_ptr<const ChargeCurve>;

/// Interpolates the curve at `soc`; exact at breakpoints.
/// Throws std::domain_error if soc is outside [0, 1].
double eval_charge_curve(const ChargeCurve& curve, double soc);

struct EvState {
    int ev_id = 0;
    ChargeCurvePtr curve;
    double soc = 0.0;
    long arrival_slot = 0;
    int port = -1;  // -1 while unassigned
};

struct PowerRequest {
    int ev_id = 0;
    double p_req_kw = 0.0;
    double m_req = 0.0;  // p_req / p_mdl; meaningful for modular stations only
};

/// Per-slot request for one EV: min(curve(soc), p_port), expressed in
/// modules as well when the station is modular.
PowerRequest compute_request(const EvState& ev, const StationConfig& station);

struct PowerStep {
    EvState state;
    double delivered_kw = 0.0;
};

/// Advances one EV by one slot at allocation `p_alloc_kw`. Power beyond the
/// curve (or the port rating) is not absorbed; SoC integrates the delivered
/// power only. Throws std::domain_error on negative allocation.
PowerStep apply_power(const EvState& ev, double p_alloc_kw, double delta_t_min,
                      double p_port_kw = -1.0);

/// One slot's allocation answer, index-aligned with `requests`.
/// `alloc_modules` is populated for modular allocations only.
struct SlotAllocation {
    long slot = 0;
    std::string policy_id;
    std::vector<PowerRequest> requests;
    std::vector<double> alloc_kw;
    std::vector<int> alloc_modules;
};

/// Feasibility of a conventional allocation: 0 <= p_i <= p_port and
/// sum p_i <= p_cs (within kPowerEps). Returns the violated constraint.
std::optional<std::string> check_feasible_conventional(const SlotAllocation& a,
                                                       double p_port_kw,
                                                       double p_cs_kw);

/// Feasibility of a modular allocation: integral m_i in [0, m_port],
/// sum m_i <= m_cs, and alloc_kw consistent with m_i * p_mdl.
std::optional<std::string> check_feasible_modular(const SlotAllocation& a,
                                                  int m_port, int m_cs,
                                                  double p_mdl_kw);

}  // namespace fcs

#endif  // FCS_CORE_HPP
