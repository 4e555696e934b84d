// SPDX-License-Identifier: Apache-2.0
#include "fcs/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fcs {

std::string to_string(Architecture arch) {
    return arch == Architecture::Conventional ? "conventional" : "modular";
}

std::optional<Architecture> architecture_from_string(const std::string& s) {
    if (s == "conventional") return Architecture::Conventional;
    if (s == "modular") return Architecture::Modular;
    return std::nullopt;
}

double CapSchedule::power_at_minutes(double minutes) const {
    if (curtail_fraction <= 0.0 || minutes < curtail_at_min) {
        return base_kw;
    }
    const double low = base_kw * (1.0 - curtail_fraction);
    if (recover_over_min <= 0.0) {
        return low;
    }
    const double progress = (minutes - curtail_at_min) / recover_over_min;
    if (progress >= 1.0) {
        return base_kw;
    }
    return low + progress * (base_kw - low);
}

double CapSchedule::power_at_slot(long slot, double delta_t_min) const {
    return power_at_minutes(static_cast<double>(slot) * delta_t_min);
}

int StationConfig::modules_available_at_slot(long slot) const {
    const double p_cs_t = cap.power_at_slot(slot, delta_t_min);
    if (p_mdl_kw <= 0.0) return 0;
    const int by_cap = static_cast<int>(std::floor(p_cs_t / p_mdl_kw));
    return std::min(m_cs, by_cap);
}

std::vector<std::string> validate_station(const StationConfig& cfg) {
    std::vector<std::string> violations;
    std::ostringstream os;
    auto add = [&](const std::string& msg) { violations.push_back(msg); };

    if (cfg.n_port < 1) add("n_port must be a positive integer");
    if (cfg.p_port_kw <= 0.0) add("p_port_kw must be > 0");
    if (cfg.delta_t_min <= 0.0) add("delta_t_min must be > 0");
    if (cfg.cap.base_kw <= 0.0) add("cap base_kw must be > 0");
    if (cfg.cap.curtail_fraction < 0.0 || cfg.cap.curtail_fraction > 1.0) {
        add("cap curtail_fraction must lie in [0, 1]");
    }

    if (cfg.n_port >= 1 && cfg.p_port_kw > 0.0 &&
        cfg.cap.max_kw() >= cfg.n_port * cfg.p_port_kw) {
        os.str("");
        os << "station is not oversubscribed: cap " << cfg.cap.max_kw()
           << " kW >= n_port * p_port = " << cfg.n_port * cfg.p_port_kw << " kW";
        add(os.str());
    }

    if (cfg.architecture == Architecture::Modular) {
        if (cfg.p_mdl_kw <= 0.0) add("p_mdl_kw must be > 0 for a modular station");
        if (cfg.m_port < 1) add("m_port must be a positive integer");
        if (cfg.m_cs < 1) add("m_cs must be a positive integer");
        if (cfg.p_mdl_kw > 0.0 && cfg.m_port >= 1 &&
            cfg.p_port_kw != cfg.m_port * cfg.p_mdl_kw) {
            os.str("");
            os << "p_port_kw (" << cfg.p_port_kw << ") != m_port * p_mdl_kw ("
               << cfg.m_port * cfg.p_mdl_kw << ")";
            add(os.str());
        }
        if (cfg.m_cs >= 1 && cfg.m_port >= 1 && cfg.n_port >= 1) {
            const int min_modules = cfg.m_port + (cfg.n_port - 1);
            if (cfg.m_cs < min_modules) {
                os.str("");
                os << "minimum station capacity violated: m_cs " << cfg.m_cs
                   << " < m_port + (n_port - 1) = " << min_modules;
                add(os.str());
            }
            if (cfg.m_cs >= cfg.n_port * cfg.m_port) {
                os.str("");
                os << "modular station is not oversubscribed: m_cs " << cfg.m_cs
                   << " >= n_port * m_port = " << cfg.n_port * cfg.m_port;
                add(os.str());
            }
        }
    }
    return violations;
}

std::vector<std::string> ChargeCurve::validate() const {
    std::vector<std::string> violations;
    if (capacity_kwh <= 0.0) violations.push_back("capacity_kwh must be > 0");
    if (points.size() < 2) {
        violations.push_back("curve needs at least two breakpoints");
        return violations;
    }
    if (points.front().soc != 0.0) violations.push_back("first breakpoint must be at soc 0");
    if (points.back().soc != 1.0) violations.push_back("last breakpoint must be at soc 1");
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i + 1].soc <= points[i].soc) {
            violations.push_back("soc breakpoints must be strictly increasing");
            break;
        }
    }
    for (const auto& p : points) {
        if (p.p_max_kw < 0.0) {
            violations.push_back("p_max values must be >= 0");
            break;
        }
    }
    return violations;
}

double eval_charge_curve(const ChargeCurve& curve, double soc) {
    if (soc < 0.0 || soc > 1.0) {
        throw std::domain_error("eval_charge_curve: soc outside [0, 1]");
    }
    const auto& pts = curve.points;
    if (soc <= pts.front().soc) return pts.front().p_max_kw;
    if (soc >= pts.back().soc) return pts.back().p_max_kw;
    auto hi = std::upper_bound(pts.begin(), pts.end(), soc,
                               [](double s, const CurvePoint& p) { return s < p.soc; });
    const auto& b = *hi;
    const auto& a = *(hi - 1);
    if (soc == a.soc) return a.p_max_kw;
    const double t = (soc - a.soc) / (b.soc - a.soc);
    return a.p_max_kw + t * (b.p_max_kw - a.p_max_kw);
}

PowerRequest compute_request(const EvState& ev, const StationConfig& station) {
    PowerRequest req;
    req.ev_id = ev.ev_id;
    req.p_req_kw = std::min(eval_charge_curve(*ev.curve, ev.soc), station.p_port_kw);
    if (station.architecture == Architecture::Modular) {
        req.m_req = req.p_req_kw / station.p_mdl_kw;
    }
    return req;
}

PowerStep apply_power(const EvState& ev, double p_alloc_kw, double delta_t_min,
                      double p_port_kw) {
    if (p_alloc_kw < 0.0) {
        throw std::domain_error("apply_power: negative allocation");
    }
    const double port_cap =
        p_port_kw < 0.0 ? std::numeric_limits<double>::infinity() : p_port_kw;
    const double acceptance = eval_charge_curve(*ev.curve, ev.soc);
    const double delivered = std::min({p_alloc_kw, acceptance, port_cap});

    PowerStep step;
    step.state = ev;
    step.delivered_kw = delivered;
    const double delta_soc =
        delivered * (delta_t_min / 60.0) / ev.curve->capacity_kwh;
    step.state.soc = std::min(1.0, ev.soc + delta_soc);
    return step;
}

std::optional<std::string> check_feasible_conventional(const SlotAllocation& a,
                                                       double p_port_kw,
                                                       double p_cs_kw) {
    std::ostringstream os;
    if (a.alloc_kw.size() != a.requests.size()) {
        return "allocation vector length does not match request vector";
    }
    double total = 0.0;
    for (std::size_t i = 0; i < a.alloc_kw.size(); ++i) {
        const double p = a.alloc_kw[i];
        if (p < -kPowerEps || p > p_port_kw + kPowerEps) {
            os << "per-port bound violated: p[" << i << "] = " << p
               << " outside [0, " << p_port_kw << "]";
            return os.str();
        }
        total += p;
    }
    if (total > p_cs_kw + kPowerEps) {
        os << "station cap violated: sum " << total << " kW > " << p_cs_kw << " kW";
        return os.str();
    }
    return std::nullopt;
}

std::optional<std::string> check_feasible_modular(const SlotAllocation& a,
                                                  int m_port, int m_cs,
                                                  double p_mdl_kw) {
    std::ostringstream os;
    if (a.alloc_modules.size() != a.requests.size() ||
        a.alloc_kw.size() != a.requests.size()) {
        return "allocation vector length does not match request vector";
    }
    long total = 0;
    for (std::size_t i = 0; i < a.alloc_modules.size(); ++i) {
        const int m = a.alloc_modules[i];
        if (m < 0 || m > m_port) {
            os << "per-port module bound violated: m[" << i << "] = " << m
               << " outside [0, " << m_port << "]";
            return os.str();
        }
        if (std::abs(a.alloc_kw[i] - m * p_mdl_kw) > kPowerEps) {
            os << "alloc_kw[" << i << "] = " << a.alloc_kw[i]
               << " inconsistent with " << m << " modules of " << p_mdl_kw << " kW";
            return os.str();
        }
        total += m;
    }
    if (total > m_cs) {
        os << "station module cap violated: sum " << total << " > " << m_cs;
        return os.str();
    }
    return std::nullopt;
}

}  // namespace fcs
