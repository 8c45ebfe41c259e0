#pragma once

#include <complex>

#include "dsglab/phasor.hpp"

namespace dsglab {

/// Wrap an angle to (-pi, pi].
double wrap_angle(double angle);

/// Infinite bus behind the series reactance seen from the converter
/// terminal (line plus grid-side filter reactance). Quasi-static model:
/// the converter is an ideal controllable current source, the terminal
/// voltage is taken at the filter capacitor node.
struct GridParams {
    double U = 1.0;        ///< infinite-bus voltage magnitude [pu]
    double X_line = 0.2;   ///< line reactance [pu]
    double X_g = 0.06;     ///< grid-side filter reactance [pu]
    double f_base = 50.0;  ///< base frequency [Hz]

    [[nodiscard]] double reactance() const { return X_line + X_g; }
    [[nodiscard]] double susceptance() const { return 1.0 / reactance(); }
    [[nodiscard]] double omega_base() const;

    /// Throws std::invalid_argument when X <= 0, U < 0, f_base <= 0 or
    /// any field is non-finite.
    void validate() const;
};

/// Constant-impedance load for islanded operation, given as the complex
/// power it draws at nominal (1 pu) voltage.
struct LoadParams {
    double P_load = 1.0;  ///< active power at nominal voltage [pu]
    double Q_load = 0.0;  ///< reactive power at nominal voltage [pu]

    /// Z = V_nom^2 / (P - jQ), V_nom = 1 pu.
    [[nodiscard]] std::complex<double> impedance() const;

    void validate() const;
};

/// Algebraic outputs of the circuit at one instant. The converter frame
/// has its d-axis on the injected current, so P_E = V_d * I_d and
/// Q_E = V_q * I_d with the q-axis current identically zero.
struct OperatingPoint {
    double P_E = 0.0;
    double Q_E = 0.0;
    double V_d = 0.0;
    double V_q = 0.0;
    double V_mag = 0.0;
    double phi = 0.0;      ///< power-factor angle atan2(Q_E, P_E); 0 at the origin
    double delta_1 = 0.0;  ///< dual power angle used for the evaluation
};

struct NortonEquivalent {
    double I_1;  ///< source current magnitude U/X [pu]
    double X;    ///< shunt reactance [pu]
};

/// Norton form of the infinite bus: current source I_1 = U/X in parallel
/// with X. The source current leads the bus voltage by pi/2.
NortonEquivalent norton_equivalent(const GridParams& grid);

struct PowerFlow {
    double P_E;
    double Q_E;
};

/// Power delivered by a current source of magnitude I_0 lagging the grid
/// Norton current by the dual power angle delta_1:
///   P_E = U * I_0 * sin(delta_1)
///   Q_E = I_0^2 * X - U * I_0 * cos(delta_1)
/// Requires I_0 >= 0.
PowerFlow transmitted_power(double I_0, double delta_1, const GridParams& grid);

struct TerminalVoltage {
    double V_d;
    double V_q;
};

/// Terminal voltage in the converter frame (d-axis on I_0):
///   V_d = U * sin(delta_1),  V_q = X * I_0 - U * cos(delta_1).
TerminalVoltage terminal_voltage(double I_0, double delta_1, const GridParams& grid);

/// Map between the conventional (voltage-source) power angle and the dual
/// power angle: delta_1 = -delta_U + pi/2.
double dual_power_angle(double delta_U);

/// phi = atan2(Q_E, P_E). Rejects the undefined (0, 0) input.
double power_factor_angle(double P_E, double Q_E);

/// Full algebraic operating point of the grid-connected circuit.
OperatingPoint grid_operating_point(double I_0, double delta_1, const GridParams& grid);

/// Operating point when the converter feeds an isolated constant-impedance
/// load: V = Z * I_0 in the converter frame, so P_E + jQ_E = I_0^2 * Z.
/// delta_1 has no external reference in an island and is reported as 0.
OperatingPoint islanded_operating_point(double I_0, const LoadParams& load);

}  // namespace dsglab
