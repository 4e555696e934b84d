// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>
#include <random>

#include "fcs/core.hpp"
#include "support/oracles.hpp"

using namespace fcs;

namespace {

ChargeCurvePtr make_curve(std::vector<CurvePoint> pts, double capacity_kwh,
                          const std::string& name = "test") {
    auto c = std::make_shared<ChargeCurve>();
    c->model_name = name;
    c->capacity_kwh = capacity_kwh;
    c->points = std::move(pts);
    return c;
}

ChargeCurvePtr flat_curve(double kw, double capacity_kwh = 60.0) {
    return make_curve({{0.0, kw}, {1.0, kw}}, capacity_kwh, "flat");
}

StationConfig conventional_station(double cap_kw, int n_port = 6,
                                   double p_port = 100.0) {
    StationConfig s;
    s.architecture = Architecture::Conventional;
    s.n_port = n_port;
    s.p_port_kw = p_port;
    s.cap.base_kw = cap_kw;
    return s;
}

StationConfig modular_station(double cap_kw, int m_cs, int n_port = 6,
                              int m_port = 4, double p_mdl = 25.0) {
    StationConfig s;
    s.architecture = Architecture::Modular;
    s.n_port = n_port;
    s.p_port_kw = m_port * p_mdl;
    s.p_mdl_kw = p_mdl;
    s.m_port = m_port;
    s.m_cs = m_cs;
    s.cap.base_kw = cap_kw;
    return s;
}

}  // namespace

TEST_CASE("charge curve evaluation") {
    auto flat = flat_curve(100.0);
    CHECK(eval_charge_curve(*flat, 0.5) == doctest::Approx(100.0));

    auto taper = make_curve({{0.0, 200.0}, {0.5, 200.0}, {1.0, 50.0}}, 80.0);
    CHECK(eval_charge_curve(*taper, 0.75) == doctest::Approx(125.0));
    CHECK(eval_charge_curve(*taper, 1.0) == 50.0);
    CHECK(eval_charge_curve(*taper, 0.5) == 200.0);
    CHECK(eval_charge_curve(*taper, 0.0) == 200.0);

    CHECK_THROWS_AS(eval_charge_curve(*taper, -0.01), std::domain_error);
    CHECK_THROWS_AS(eval_charge_curve(*taper, 1.01), std::domain_error);
}

TEST_CASE("interpolation stays between adjacent breakpoints") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<CurvePoint> pts;
        pts.push_back({0.0, testsup::uniform(rng, 0.0, 250.0)});
        double s = 0.0;
        const int knots = testsup::uniform_int(rng, 1, 5);
        for (int k = 0; k < knots; ++k) {
            s += testsup::uniform(rng, 0.05, 0.3);
            if (s >= 0.99) break;
            pts.push_back({s, testsup::uniform(rng, 0.0, 250.0)});
        }
        pts.push_back({1.0, testsup::uniform(rng, 0.0, 250.0)});
        auto curve = make_curve(std::move(pts), 60.0);
        REQUIRE(curve->validate().empty());

        for (int q = 0; q < 20; ++q) {
            const double soc = testsup::uniform01(rng);
            const double p = eval_charge_curve(*curve, soc);
            for (std::size_t i = 0; i + 1 < curve->points.size(); ++i) {
                const auto& a = curve->points[i];
                const auto& b = curve->points[i + 1];
                if (soc >= a.soc && soc <= b.soc) {
                    CHECK(p >= std::min(a.p_max_kw, b.p_max_kw) - 1e-9);
                    CHECK(p <= std::max(a.p_max_kw, b.p_max_kw) + 1e-9);
                }
            }
        }
    }
}

TEST_CASE("curve validation catches malformed inputs") {
    ChargeCurve c;
    c.capacity_kwh = 50.0;
    c.points = {{0.1, 100.0}, {1.0, 50.0}};
    CHECK(!c.validate().empty());  // must start at 0

    c.points = {{0.0, 100.0}, {0.9, 50.0}};
    CHECK(!c.validate().empty());  // must end at 1

    c.points = {{0.0, 100.0}, {0.5, 80.0}, {0.5, 60.0}, {1.0, 50.0}};
    CHECK(!c.validate().empty());  // strictly increasing soc

    c.points = {{0.0, 100.0}, {1.0, -5.0}};
    CHECK(!c.validate().empty());  // non-negative power

    c.points = {{0.0, 100.0}, {1.0, 50.0}};
    CHECK(c.validate().empty());
}

TEST_CASE("compute_request caps at the port rating") {
    auto station = conventional_station(400.0);
    EvState ev{1, flat_curve(150.0), 0.2, 0, 0};
    auto req = compute_request(ev, station);
    CHECK(req.p_req_kw == doctest::Approx(100.0));

    auto mod = modular_station(400.0, 16);
    EvState ev2{2, flat_curve(80.0), 0.2, 0, 0};
    auto req2 = compute_request(ev2, mod);
    CHECK(req2.p_req_kw == doctest::Approx(80.0));
    CHECK(req2.m_req == doctest::Approx(3.2));

    EvState full{3, flat_curve(0.0), 0.5, 0, 0};
    CHECK(compute_request(full, station).p_req_kw == 0.0);
}

TEST_CASE("request never exceeds port rating or curve value") {
    std::mt19937_64 rng(11);
    auto station = conventional_station(400.0);
    for (int t = 0; t < 500; ++t) {
        auto curve = flat_curve(testsup::uniform(rng, 0.0, 300.0));
        EvState ev{t, curve, testsup::uniform01(rng), 0, 0};
        auto req = compute_request(ev, station);
        CHECK(req.p_req_kw <= station.p_port_kw + 1e-12);
        CHECK(req.p_req_kw <= eval_charge_curve(*curve, ev.soc) + 1e-12);
    }
}

TEST_CASE("apply_power integrates delivered energy") {
    EvState ev{1, flat_curve(100.0, 60.0), 0.10, 0, 0};

    auto step = apply_power(ev, 60.0, 0.5);
    CHECK(step.delivered_kw == doctest::Approx(60.0));
    CHECK(step.state.soc == doctest::Approx(0.10 + 60.0 * (0.5 / 60.0) / 60.0));

    auto idle = apply_power(ev, 0.0, 0.5);
    CHECK(idle.delivered_kw == 0.0);
    CHECK(idle.state.soc == 0.10);

    EvState tapered{2, flat_curve(40.0, 60.0), 0.10, 0, 0};
    auto clipped = apply_power(tapered, 100.0, 0.5);
    CHECK(clipped.delivered_kw == doctest::Approx(40.0));

    CHECK_THROWS_AS(apply_power(ev, -1.0, 0.5), std::domain_error);
}

TEST_CASE("soc is monotone and capped at 1") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 100; ++t) {
        EvState ev{t, flat_curve(testsup::uniform(rng, 10.0, 250.0),
                                 testsup::uniform(rng, 20.0, 100.0)),
                   testsup::uniform(rng, 0.0, 0.3), 0, 0};
        double prev = ev.soc;
        for (int k = 0; k < 400; ++k) {
            const double alloc = testsup::uniform(rng, 0.0, 300.0);
            auto step = apply_power(ev, alloc, 0.5, 100.0);
            CHECK(step.delivered_kw <=
                  std::min(alloc, eval_charge_curve(*ev.curve, ev.soc)) + 1e-12);
            CHECK(step.delivered_kw <= 100.0 + 1e-12);
            ev = step.state;
            CHECK(ev.soc >= prev);
            CHECK(ev.soc <= 1.0);
            prev = ev.soc;
        }
    }
}

TEST_CASE("station validation") {
    SUBCASE("minimum module capacity boundary holds at equality") {
        auto s = modular_station(300.0, 9);
        CHECK(validate_station(s).empty());  // 9 >= 4 + (6 - 1)
        s.m_cs = 8;
        CHECK(!validate_station(s).empty());
    }
    SUBCASE("medium bottleneck modular config is valid") {
        auto s = modular_station(400.0, 16);
        CHECK(validate_station(s).empty());
    }
    SUBCASE("non-oversubscribed station is rejected") {
        auto s = conventional_station(600.0);
        auto v = validate_station(s);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("not oversubscribed") != std::string::npos);
    }
    SUBCASE("port rating must equal m_port * p_mdl") {
        auto s = modular_station(400.0, 16);
        s.p_port_kw = 90.0;
        CHECK(!validate_station(s).empty());
    }
    SUBCASE("modular oversubscription bound") {
        auto s = modular_station(400.0, 24);
        CHECK(!validate_station(s).empty());  // m_cs == n_port * m_port
    }
}

TEST_CASE("feasibility checks") {
    SlotAllocation a;
    a.requests = {{1, 60.0, 0.0}, {2, 80.0, 0.0}};
    a.alloc_kw = {50.0, 50.0};
    CHECK(!check_feasible_conventional(a, 100.0, 120.0).has_value());
    CHECK(check_feasible_conventional(a, 100.0, 90.0).has_value());
    a.alloc_kw = {101.0, 0.0};
    CHECK(check_feasible_conventional(a, 100.0, 120.0).has_value());

    SlotAllocation m;
    m.requests = {{1, 60.0, 2.4}, {2, 80.0, 3.2}};
    m.alloc_modules = {2, 3};
    m.alloc_kw = {50.0, 75.0};
    CHECK(!check_feasible_modular(m, 4, 12, 25.0).has_value());
    CHECK(check_feasible_modular(m, 4, 4, 25.0).has_value());
    m.alloc_modules = {5, 0};
    m.alloc_kw = {125.0, 0.0};
    CHECK(check_feasible_modular(m, 4, 12, 25.0).has_value());
}
