#pragma once

#include <functional>
#include <vector>

#include "dsglab/circuit.hpp"
#include "dsglab/timeseries.hpp"

namespace dsglab {

/// Parameters of the revised power-angle curve once the braking loop is
/// active: S(delta_1) = P_m sin(delta_1) - K_PL U cos(delta_1) + K_PL X I_d,
/// equivalently P'_m sin(delta_1 - alpha) + K_PL X I_d with
/// P'_m = sqrt(P_m^2 + (K_PL U)^2) and alpha = atan(K_PL U / P_m).
struct BrakingCurveParams {
    double P_m;    ///< peak of the plain power-angle curve, U * I [pu]
    double K_PL;   ///< braking-to-droop gain ratio K_Q / K_p
    double U;      ///< grid voltage magnitude [pu]
    double X;      ///< series reactance [pu]
    double I_d;    ///< current magnitude in the constant offset term [pu]
    double P_ref;  ///< active power reference [pu]

    [[nodiscard]] double p_m_prime() const;
    [[nodiscard]] double alpha() const;
    void validate() const;
};

/// Root of the governing power curve with its stability classification.
/// With ddelta_1/dt proportional to (P_ref - curve), a positive curve
/// slope is locally asymptotically stable.
struct Equilibrium {
    double delta_1;      ///< wrapped to (-pi, pi]
    bool stable;         ///< curve_slope > 0
    double curve_slope;  ///< d(curve)/d(delta_1) at the root [pu/rad]
};

struct CurvePoint {
    double delta_1;
    double value;
};

/// P_E(delta_1) = U * I_0 * sin(delta_1) sampled uniformly over (-pi, pi].
std::vector<CurvePoint> power_angle_curve(double I_0, const GridParams& grid,
                                          int n_samples);

double revised_power(double delta_1, const BrakingCurveParams& params);

/// Analytic slope of the revised power curve.
double revised_power_slope(double delta_1, const BrakingCurveParams& params);

/// Peak of the revised power curve with I_d held at the current limit:
/// S_max = sqrt(P_m^2 + (K_PL U)^2) + K_PL * I_d * X.
double s_max(const BrakingCurveParams& params);

struct CriterionResult {
    bool holds;
    double margin;  ///< K_Q/K_p - P_ref/(I_max * X)
};

/// Braking-gain design rule: the braking loop preserves an equilibrium
/// through any voltage dip when K_Q/K_p > P_ref/(I_max * X) (strict).
CriterionResult braking_gain_criterion(double K_Q, double K_p, double P_ref,
                                       double I_max, double X);

/// All roots of curve(delta_1) = P_ref on (-pi, pi] for a smooth curve,
/// located by bisection on sign changes over a 4096-sample grid and refined
/// to |curve - P_ref| < tol (tol = 0 bisects to bracket exhaustion).
/// `slope` supplies the derivative used for classification.
std::vector<Equilibrium> find_curve_equilibria(
    const std::function<double(double)>& curve,
    const std::function<double(double)>& slope, double P_ref, double tol = 1e-10);

/// Equilibria of the plain power-angle curve (braking = false) or of the
/// revised curve (braking = true). Empty when the reference exceeds the
/// curve peak — the no-equilibrium transient-instability case.
std::vector<Equilibrium> find_equilibria(double P_ref, const BrakingCurveParams& params,
                                         bool braking);

/// Classical voltage-source (synchronous machine) power expressions:
///   P = U V sin(delta_U) / X,  Q = V^2/X - U V cos(delta_U) / X.
/// Under the structural map {U->I_1, V->I_0, X->B, delta_U->delta_1} these
/// coincide numerically with the current-source expressions.
PowerFlow sg_power(double delta_U, double U, double V, double X);

/// Pole-slip event: first sample where the cumulative excursion
/// |delta_1(t) - delta_1(0)| crosses a new multiple of 2*pi.
struct LosEvent {
    double t;
    double excursion;  ///< |delta_1(t) - delta_1(0)| at the detection sample [rad]
};

/// Scans a trajectory for loss of synchronization. Rejects an empty
/// trajectory; bounded trajectories yield no events.
std::vector<LosEvent> detect_los(const TimeSeries& ts);

}  // namespace dsglab
