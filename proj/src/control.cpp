#include "dsglab/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dsglab {

void DsgParams::validate() const {
    const double pi2 = std::numbers::pi / 2.0;
    if (!(K_p > 0.0)) throw std::invalid_argument("DsgParams: K_p must be > 0");
    if (!(K_Q >= 0.0)) throw std::invalid_argument("DsgParams: K_Q must be >= 0");
    if (!(K_V >= 0.0)) throw std::invalid_argument("DsgParams: K_V must be >= 0");
    if (!(I_max > 0.0)) throw std::invalid_argument("DsgParams: I_max must be > 0");
    if (!(I_nom >= 0.0 && I_nom <= I_max)) {
        throw std::invalid_argument("DsgParams: I_nom must lie in [0, I_max]");
    }
    if (!(phi_0 >= -pi2 && phi_0 < pi2)) {
        throw std::invalid_argument("DsgParams: phi_0 must lie in [-pi/2, pi/2)");
    }
    if (sync == SyncKind::Inertial) {
        if (!(J > 0.0)) throw std::invalid_argument("DsgParams: inertial sync requires J > 0");
        if (!(D >= 0.0)) throw std::invalid_argument("DsgParams: D must be >= 0");
    }
    if (qv_dyn == QvDynamics::Inertial) {
        if (!(J_q > 0.0)) throw std::invalid_argument("DsgParams: inertial Q/V requires J_q > 0");
        if (!(D_q >= 0.0)) throw std::invalid_argument("DsgParams: D_q must be >= 0");
    }
    if (!(tau_i >= 0.0)) throw std::invalid_argument("DsgParams: tau_i must be >= 0");
    if (!(hysteresis >= 0.0)) throw std::invalid_argument("DsgParams: hysteresis must be >= 0");
    if (!(k_sec >= 0.0)) throw std::invalid_argument("DsgParams: k_sec must be >= 0");
}

int braking_sign(double P_E, double Q_E, double phi_0) {
    if (P_E == 0.0 && Q_E == 0.0) {
        throw std::invalid_argument("braking_sign: undefined at (0, 0)");
    }
    return std::atan2(Q_E, P_E) - phi_0 >= 0.0 ? 1 : 0;
}

double frequency_deviation(double P_E, double V_q, int sign, const DsgParams& p) {
    return p.K_p * (P_E - p.P_ref) + sign * p.K_Q * V_q;
}

double inertial_sync_derivative(double P_E, double V_q, int sign, double d_omega,
                                const DsgParams& p) {
    if (!(p.J > 0.0)) throw std::invalid_argument("inertial_sync_derivative: J must be > 0");
    return ((P_E - p.P_ref) + sign * p.K_Q * V_q - p.D * d_omega) / p.J;
}

double delta_dot(double d_omega, double f_base) {
    return -2.0 * std::numbers::pi * f_base * d_omega;
}

double qv_error(double V_mag, double Q_E, const DsgParams& p) {
    return p.qv_input == QvInput::Voltage ? p.V_ref - V_mag : p.Q_ref - Q_E;
}

double current_reference_unclamped(double V_mag, double Q_E, const DsgParams& p,
                                   double qv_state, double trim) {
    if (p.qv_dyn == QvDynamics::Inertial) {
        return p.I_nom + trim + qv_state;
    }
    return p.I_nom + trim + p.K_V * qv_error(V_mag, Q_E, p);
}

double current_reference(double V_mag, double Q_E, const DsgParams& p,
                         double qv_state, double trim) {
    return std::clamp(current_reference_unclamped(V_mag, Q_E, p, qv_state, trim),
                      0.0, p.I_max);
}

double current_lag_derivative(double I_d, double I_d_star, double tau_i) {
    if (!(tau_i > 0.0)) {
        throw std::invalid_argument("current_lag_derivative: requires tau_i > 0");
    }
    return (I_d_star - I_d) / tau_i;
}

double qv_state_derivative(double error, double qv_state, const DsgParams& p) {
    if (!(p.J_q > 0.0)) throw std::invalid_argument("qv_state_derivative: J_q must be > 0");
    return (error - p.D_q * qv_state) / p.J_q;
}

double secondary_control_derivative(double V_mag, double Q_E, const DsgParams& p,
                                    const DsgState& state) {
    double d = p.k_sec * (p.V_ref - V_mag);
    // anti-windup: hold the integrator while the current clamp is active
    const double ref = current_reference_unclamped(V_mag, Q_E, p, state.qv_state,
                                                   state.sec_state);
    if ((ref >= p.I_max && d > 0.0) || (ref <= 0.0 && d < 0.0)) d = 0.0;
    return d;
}

}  // namespace dsglab
