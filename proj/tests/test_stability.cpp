#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "dsglab/stability.hpp"

using namespace dsglab;

namespace {
constexpr double kPi = std::numbers::pi;

BrakingCurveParams table_curve(double U = 1.0, double K_PL = 3.0) {
    // Reference gain set: P_m = U * I_max with I_max = 1.05, X = 0.26
    return {U * 1.05, K_PL, U, 0.26, 1.05, 0.8};
}
}  // namespace

TEST_CASE("revised power") {
    BrakingCurveParams off = table_curve(1.0, 0.0);
    CHECK(revised_power(kPi / 2.0, off) == doctest::Approx(1.05).epsilon(1e-14));

    BrakingCurveParams dip = table_curve(0.6, 3.0);
    CHECK(dip.P_m == doctest::Approx(0.63).epsilon(1e-14));
    CHECK(revised_power(kPi / 2.0, dip) == doctest::Approx(1.449).epsilon(1e-12));

    // expanded vs closed form at delta_1 = 1 rad
    const BrakingCurveParams p = table_curve();
    const double closed = p.p_m_prime() * std::sin(1.0 - p.alpha()) + p.K_PL * p.X * p.I_d;
    CHECK(std::abs(revised_power(1.0, p) - closed) <= 1e-12);

    CHECK(p.p_m_prime() >= p.P_m);
    CHECK(p.alpha() >= 0.0);
    CHECK(p.alpha() < kPi / 2.0);
}

TEST_CASE("s_max closed form") {
    CHECK(s_max(table_curve(1.0, 0.0)) == doctest::Approx(1.05).epsilon(1e-14));
    CHECK(s_max(table_curve(1.0, 3.0)) == doctest::Approx(3.9974430150625633).epsilon(1e-14));
    CHECK(s_max(table_curve(0.6, 3.0)) == doctest::Approx(2.7260658090375385).epsilon(1e-14));
}

TEST_CASE("s_max equals the sampled curve maximum") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double U = 0.05 + 1.15 * u01(rng);
        const double i_max = 0.5 + 1.0 * u01(rng);
        BrakingCurveParams p{U * i_max, 5.0 * u01(rng), U, 0.05 + 0.95 * u01(rng), i_max, 0.5};
        double peak = -1e300;
        const int n = 100000;
        for (int k = 1; k <= n; ++k) {
            peak = std::max(peak, revised_power(-kPi + 2.0 * kPi * k / n, p));
        }
        CHECK(std::abs(s_max(p) - peak) <= 1e-8);
    }
}

TEST_CASE("s_max is strictly increasing in the braking ratio") {
    double prev = s_max(table_curve(1.0, 0.0));
    for (double kpl = 0.05; kpl <= 3.0 + 1e-12; kpl += 0.05) {
        const double v = s_max(table_curve(1.0, kpl));
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("braking gain criterion") {
    const auto res = braking_gain_criterion(0.06, 0.02, 0.8, 1.05, 0.26);
    CHECK(res.holds);
    CHECK(res.margin == doctest::Approx(0.0695970695970698).epsilon(1e-12));

    CHECK_FALSE(braking_gain_criterion(0.0, 0.02, 0.5, 1.05, 0.26).holds);
    CHECK(braking_gain_criterion(1e-6, 0.02, 0.0, 1.05, 0.26).holds);
    CHECK_FALSE(braking_gain_criterion(0.0, 0.02, 0.0, 1.05, 0.26).holds);  // strict

    CHECK_THROWS_AS(braking_gain_criterion(0.06, 0.0, 0.8, 1.05, 0.26), std::invalid_argument);
    CHECK_THROWS_AS(braking_gain_criterion(0.06, 0.02, 0.8, 0.0, 0.26), std::invalid_argument);
    CHECK_THROWS_AS(braking_gain_criterion(0.06, 0.02, 0.8, 1.05, -1.0), std::invalid_argument);
}

TEST_CASE("find equilibria, braking off") {
    BrakingCurveParams p = table_curve(1.0, 0.0);
    const auto eqs = find_equilibria(0.5, p, false);
    REQUIRE(eqs.size() == 2);
    const double root = std::asin(0.5 / 1.05);  // arcsine oracle
    CHECK(std::abs(eqs[0].delta_1 - root) < 1e-9);
    CHECK(eqs[0].stable);
    CHECK(eqs[0].curve_slope > 0.0);
    CHECK(std::abs(eqs[1].delta_1 - (kPi - root)) < 1e-9);
    CHECK_FALSE(eqs[1].stable);

    // deep dip, no braking: reference above the curve peak
    BrakingCurveParams dip = table_curve(0.6, 0.0);
    CHECK(find_equilibria(0.8, dip, false).empty());
}

TEST_CASE("find equilibria, braking on, rides the dip") {
    BrakingCurveParams dip = table_curve(0.6, 3.0);
    CHECK(s_max(dip) > 0.8);
    const auto eqs = find_equilibria(0.8, dip, true);
    REQUIRE(!eqs.empty());
    bool any_stable = false;
    for (const auto& e : eqs) {
        CHECK(std::abs(revised_power(e.delta_1, dip) - 0.8) < 1e-9);
        if (e.stable) any_stable = true;
    }
    CHECK(any_stable);
}

TEST_CASE("criterion soundness near the design boundary") {
    // Whenever the gain criterion holds (moderate margin), the braking-on
    // curve keeps at least one stable equilibrium for every dip depth.
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const double X = 0.15 + 0.25 * u01(rng);
        const double i_max = 0.9 + 0.3 * u01(rng);
        const double p_ref = 0.2 + 0.8 * u01(rng);
        const double gamma = 1.0001 + 0.0999 * u01(rng);
        const double k_pl = gamma * p_ref / (i_max * X);
        const double k_p = 0.01 + 0.04 * u01(rng);
        REQUIRE(braking_gain_criterion(k_pl * k_p, k_p, p_ref, i_max, X).holds);
        for (int ui = 0; ui <= 46; ++ui) {
            const double U = 0.05 + (1.2 - 0.05) * ui / 46.0;
            BrakingCurveParams p{U * i_max, k_pl, U, X, i_max, p_ref};
            const auto eqs = find_equilibria(p_ref, p, true);
            bool any_stable = false;
            for (const auto& e : eqs) any_stable = any_stable || e.stable;
            CHECK(any_stable);
        }
    }
}

TEST_CASE("sg power expressions") {
    const auto z = sg_power(0.0, 1.0, 1.0, 0.26);
    CHECK(z.P_E == doctest::Approx(0.0));
    CHECK(z.Q_E == doctest::Approx(0.0));

    const auto q = sg_power(kPi / 2.0, 1.0, 1.0, 0.26);
    CHECK(q.P_E == doctest::Approx(3.846153846153846).epsilon(1e-13));
    CHECK(q.Q_E == doctest::Approx(3.846153846153846).epsilon(1e-12));

    CHECK_THROWS_AS(sg_power(0.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("structural duality map makes both expressions identical") {
    std::mt19937 rng(31337);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 10000; ++k) {
        GridParams g{0.1 + 1.1 * u01(rng), 0.05 + 0.95 * u01(rng), 0.0, 50.0};
        const double i0 = 2.0 * u01(rng);
        const double d = -kPi + 2.0 * kPi * u01(rng);
        const auto n = norton_equivalent(g);
        const auto dsg = transmitted_power(i0, d, g);
        const auto sg = sg_power(d, n.I_1, i0, g.susceptance());
        CHECK(std::abs(dsg.P_E - sg.P_E) <= 1e-12);
        CHECK(std::abs(dsg.Q_E - sg.Q_E) <= 1e-12);
    }
}

TEST_CASE("power angle curve sampling") {
    const GridParams g{1.0, 0.2, 0.06, 50.0};
    const auto curve = power_angle_curve(1.05, g, 4096);
    REQUIRE(curve.size() == 4096);
    CHECK(curve.front().delta_1 > -kPi);
    CHECK(curve.back().delta_1 == doctest::Approx(kPi));

    double peak = -1e300, peak_d = 0.0;
    for (const auto& pt : curve) {
        if (pt.value > peak) { peak = pt.value; peak_d = pt.delta_1; }
    }
    CHECK(peak == doctest::Approx(1.05).epsilon(1e-12));
    CHECK(peak_d == doctest::Approx(kPi / 2.0).epsilon(1e-12));

    for (const auto& pt : power_angle_curve(0.0, g, 64)) CHECK(pt.value == 0.0);

    // odd symmetry: interior grid points pair up as (delta, -delta)
    for (std::size_t k = 0; k + 1 < curve.size() / 2; ++k) {
        const auto& a = curve[k];
        const auto& b = curve[curve.size() - 2 - k];
        CHECK(std::abs(a.delta_1 + b.delta_1) < 1e-12);
        CHECK(std::abs(a.value + b.value) < 1e-12);
    }

    CHECK_THROWS_AS(power_angle_curve(1.0, g, 1), std::invalid_argument);
}

TEST_CASE("loss-of-synchronization detection") {
    TimeSeries ramp;
    for (int k = 0; k <= 1000; ++k) {
        const double t = 1e-3 * k;
        ramp.push_row(t, 10.0 * t, 50.0, 0, 0, 0, 0, 0, 0);
    }
    const auto ev = detect_los(ramp);
    REQUIRE(ev.size() == 1);
    CHECK(std::abs(ev.front().t - 0.6283185307179586) <= 1e-3 + 1e-12);
    CHECK(ev.front().excursion >= 2.0 * kPi);

    TimeSeries flat;
    for (int k = 0; k <= 100; ++k) flat.push_row(1e-2 * k, 0.9, 50.0, 0, 0, 0, 0, 0, 0);
    CHECK(detect_los(flat).empty());

    TimeSeries damped;
    for (int k = 0; k <= 2000; ++k) {
        const double t = 1e-3 * k;
        damped.push_row(t, 0.3 * std::exp(-t) * std::sin(20.0 * t), 50.0, 0, 0, 0, 0, 0, 0);
    }
    CHECK(detect_los(damped).empty());

    CHECK_THROWS_AS(detect_los(TimeSeries{}), std::invalid_argument);

    // two pole slips emit two events
    TimeSeries fast;
    for (int k = 0; k <= 1500; ++k) {
        const double t = 1e-3 * k;
        fast.push_row(t, 10.0 * t, 50.0, 0, 0, 0, 0, 0, 0);
    }
    CHECK(detect_los(fast).size() == 2);
}
