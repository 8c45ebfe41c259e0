#include "dsglab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dsglab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kScanSamples = 4096;
}  // namespace

double BrakingCurveParams::p_m_prime() const { return std::hypot(P_m, K_PL * U); }

double BrakingCurveParams::alpha() const { return std::atan2(K_PL * U, P_m); }

void BrakingCurveParams::validate() const {
    if (!std::isfinite(P_m) || !std::isfinite(K_PL) || !std::isfinite(U) ||
        !std::isfinite(X) || !std::isfinite(I_d) || !std::isfinite(P_ref)) {
        throw std::invalid_argument("BrakingCurveParams: non-finite field");
    }
    if (P_m < 0.0 || K_PL < 0.0 || U < 0.0 || I_d < 0.0) {
        throw std::invalid_argument("BrakingCurveParams: negative magnitude");
    }
    if (X <= 0.0) throw std::invalid_argument("BrakingCurveParams: X must be > 0");
}

std::vector<CurvePoint> power_angle_curve(double I_0, const GridParams& grid,
                                          int n_samples) {
    if (n_samples < 2) {
        throw std::invalid_argument("power_angle_curve: n_samples must be >= 2");
    }
    if (!(I_0 >= 0.0)) throw std::invalid_argument("power_angle_curve: I_0 must be >= 0");
    grid.validate();
    std::vector<CurvePoint> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    for (int k = 1; k <= n_samples; ++k) {
        const double d = -kPi + 2.0 * kPi * k / n_samples;
        out.push_back({d, grid.U * I_0 * std::sin(d)});
    }
    return out;
}

double revised_power(double delta_1, const BrakingCurveParams& p) {
    return p.P_m * std::sin(delta_1) - p.K_PL * p.U * std::cos(delta_1) +
           p.K_PL * p.X * p.I_d;
}

double revised_power_slope(double delta_1, const BrakingCurveParams& p) {
    return p.P_m * std::cos(delta_1) + p.K_PL * p.U * std::sin(delta_1);
}

double s_max(const BrakingCurveParams& p) {
    p.validate();
    return p.p_m_prime() + p.K_PL * p.I_d * p.X;
}

CriterionResult braking_gain_criterion(double K_Q, double K_p, double P_ref,
                                       double I_max, double X) {
    if (!(K_p > 0.0)) throw std::invalid_argument("braking_gain_criterion: K_p must be > 0");
    if (!(I_max > 0.0)) throw std::invalid_argument("braking_gain_criterion: I_max must be > 0");
    if (!(X > 0.0)) throw std::invalid_argument("braking_gain_criterion: X must be > 0");
    const double margin = K_Q / K_p - P_ref / (I_max * X);
    return {margin > 0.0, margin};
}

std::vector<Equilibrium> find_curve_equilibria(
    const std::function<double(double)>& curve,
    const std::function<double(double)>& slope, double P_ref, double tol) {
    std::vector<Equilibrium> roots;
    auto g = [&](double d) { return curve(d) - P_ref; };

    auto add_root = [&](double d) {
        d = wrap_angle(d);
        for (const auto& r : roots) {
            if (std::abs(r.delta_1 - d) < 1e-8) return;
        }
        const double sl = slope(d);
        roots.push_back({d, sl > 0.0, sl});
    };

    double prev_d = -kPi + 2.0 * kPi / kScanSamples;
    double prev_g = g(prev_d);
    if (prev_g == 0.0) add_root(prev_d);
    for (int k = 2; k <= kScanSamples; ++k) {
        const double d = -kPi + 2.0 * kPi * k / kScanSamples;
        const double gd = g(d);
        if (gd == 0.0) {
            add_root(d);
        } else if (prev_g != 0.0 && std::signbit(prev_g) != std::signbit(gd)) {
            double lo = prev_d, hi = d, glo = prev_g;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid == lo || mid == hi) break;
                const double gm = g(mid);
                if (std::abs(gm) < tol) {
                    lo = hi = mid;
                    break;
                }
                if (std::signbit(glo) != std::signbit(gm)) {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            add_root(0.5 * (lo + hi));
        }
        prev_d = d;
        prev_g = gd;
    }
    std::sort(roots.begin(), roots.end(),
              [](const Equilibrium& a, const Equilibrium& b) { return a.delta_1 < b.delta_1; });
    return roots;
}

std::vector<Equilibrium> find_equilibria(double P_ref, const BrakingCurveParams& params,
                                         bool braking) {
    params.validate();
    if (braking) {
        return find_curve_equilibria(
            [&](double d) { return revised_power(d, params); },
            [&](double d) { return revised_power_slope(d, params); }, P_ref);
    }
    return find_curve_equilibria(
        [&](double d) { return params.P_m * std::sin(d); },
        [&](double d) { return params.P_m * std::cos(d); }, P_ref);
}

PowerFlow sg_power(double delta_U, double U, double V, double X) {
    if (!(X > 0.0)) throw std::invalid_argument("sg_power: X must be > 0");
    return {U * V * std::sin(delta_U) / X,
            V * V / X - U * V * std::cos(delta_U) / X};
}

std::vector<LosEvent> detect_los(const TimeSeries& ts) {
    if (ts.empty()) throw std::invalid_argument("detect_los: empty trajectory");
    std::vector<LosEvent> events;
    const double d0 = ts.delta_1.front();
    double threshold = 2.0 * kPi;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double exc = std::abs(ts.delta_1[i] - d0);
        while (exc >= threshold) {
            events.push_back({ts.t[i], exc});
            threshold += 2.0 * kPi;
        }
    }
    return events;
}

}  // namespace dsglab
