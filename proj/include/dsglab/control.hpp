#pragma once

namespace dsglab {

/// Synchronization loop variant: plain P-f droop or the inertial link
/// 1/(Js + D). The droop is recovered from the inertial form in the limit
/// J -> 0 with D = 1/K_p.
enum class SyncKind { Proportional, Inertial };

/// Feedback signal of the current-magnitude loop.
enum class QvInput { Voltage, ReactivePower };

/// Regulator of the current-magnitude loop: proportional gain or the
/// inertial link 1/(J_q s + D_q).
enum class QvDynamics { Proportional, Inertial };

struct DsgParams {
    double K_p = 0.02;     ///< P-f droop gain [pu-freq / pu-power]
    double K_Q = 0.06;     ///< braking (synchronization-enhanced) coefficient
    double K_V = 0.01;     ///< V-I (or Q-I) droop gain
    double phi_0 = 0.0;    ///< braking activation threshold on the power-factor angle [rad]
    double I_max = 1.05;   ///< converter current limit [pu]
    double I_nom = 1.0;    ///< nominal current setpoint [pu]
    double V_ref = 1.0;    ///< terminal voltage reference [pu]
    double P_ref = 0.8;    ///< active power reference [pu]
    double Q_ref = 0.0;    ///< reactive power reference for the Q-I variant [pu]

    SyncKind sync = SyncKind::Proportional;
    double J = 2.0;   ///< virtual inertia (inertial sync) [pu-power * s / pu-freq]
    double D = 50.0;  ///< virtual damping (inertial sync)

    QvInput qv_input = QvInput::Voltage;
    QvDynamics qv_dyn = QvDynamics::Proportional;
    double J_q = 1.0;
    double D_q = 100.0;

    double tau_i = 0.0;       ///< first-order lag standing in for the inner current loop [s]; 0 = ideal
    double hysteresis = 0.0;  ///< optional deactivation band below phi_0 for the braking sign [rad]
    double k_sec = 1.0;       ///< islanded secondary-control integral gain

    void validate() const;
};

/// Integrable controller state. delta_1 is cumulative (never wrapped) so
/// pole slips remain visible. d_omega is a state only in inertial sync
/// mode; I_d is a state only when tau_i > 0.
struct DsgState {
    double delta_1 = 0.0;   ///< dual power angle [rad], cumulative
    double d_omega = 0.0;   ///< per-unit frequency deviation
    double I_d = 0.0;       ///< actual d-axis current [pu]
    double qv_state = 0.0;  ///< integrator of the inertial Q/V regulator
    double sec_state = 0.0; ///< islanded secondary-control integrator
};

/// Braking activation per the power-factor-angle test: 1 iff
/// atan2(Q_E, P_E) - phi_0 >= 0, else 0. Rejects (0, 0).
int braking_sign(double P_E, double Q_E, double phi_0);

/// Proportional synchronization loop:
///   d_omega = K_p (P_E - P_ref) + sign * K_Q * V_q.
double frequency_deviation(double P_E, double V_q, int sign, const DsgParams& p);

/// Inertial synchronization loop:
///   J * d(d_omega)/dt = (P_E - P_ref) + sign * K_Q * V_q - D * d_omega.
/// Requires J > 0.
double inertial_sync_derivative(double P_E, double V_q, int sign, double d_omega,
                                const DsgParams& p);

/// d(delta_1)/dt = -2*pi*f_base * d_omega. delta_1 is a lag angle, so a
/// converter frequency above the grid frequency shrinks it.
double delta_dot(double d_omega, double f_base);

/// Feedback error of the current-magnitude loop: V_ref - V_mag for the
/// V-I variant, Q_ref - Q_E for the Q-I variant.
double qv_error(double V_mag, double Q_E, const DsgParams& p);

/// d-axis current reference, clamped to [0, I_max]. Proportional variant:
/// I_nom + trim + K_V * error; inertial variant: I_nom + trim + qv_state.
/// The q-axis reference is identically zero.
double current_reference(double V_mag, double Q_E, const DsgParams& p,
                         double qv_state = 0.0, double trim = 0.0);

/// Unclamped counterpart of current_reference, used for anti-windup tests.
double current_reference_unclamped(double V_mag, double Q_E, const DsgParams& p,
                                   double qv_state = 0.0, double trim = 0.0);

/// Inner current-loop lag: dI_d/dt = (I_d_star - I_d) / tau_i. Requires
/// tau_i > 0; with tau_i = 0 the current tracks the reference algebraically
/// and no state derivative exists.
double current_lag_derivative(double I_d, double I_d_star, double tau_i);

/// Inertial Q/V regulator state: d(qv_state)/dt = (error - D_q*qv_state)/J_q.
double qv_state_derivative(double error, double qv_state, const DsgParams& p);

/// Islanded secondary control, a slow integral trim on the nominal current:
/// d(sec_state)/dt = k_sec * (V_ref - V_mag), frozen while the downstream
/// current clamp is active (anti-windup).
double secondary_control_derivative(double V_mag, double Q_E, const DsgParams& p,
                                    const DsgState& state);

}  // namespace dsglab
