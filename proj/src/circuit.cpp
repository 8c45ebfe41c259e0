#include "dsglab/circuit.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dsglab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double wrap_angle(double angle) {
    double w = std::fmod(angle + kPi, kTwoPi);
    if (w <= 0.0) w += kTwoPi;
    return w - kPi;
}

double GridParams::omega_base() const { return kTwoPi * f_base; }

void GridParams::validate() const {
    if (!std::isfinite(U) || !std::isfinite(X_line) || !std::isfinite(X_g) ||
        !std::isfinite(f_base)) {
        throw std::invalid_argument("GridParams: non-finite field");
    }
    if (reactance() <= 0.0) {
        throw std::invalid_argument("GridParams: X_line + X_g must be > 0");
    }
    if (U < 0.0) throw std::invalid_argument("GridParams: U must be >= 0");
    if (f_base <= 0.0) throw std::invalid_argument("GridParams: f_base must be > 0");
}

std::complex<double> LoadParams::impedance() const {
    return 1.0 / std::complex<double>(P_load, -Q_load);
}

void LoadParams::validate() const {
    if (!std::isfinite(P_load) || !std::isfinite(Q_load)) {
        throw std::invalid_argument("LoadParams: non-finite field");
    }
    if (P_load == 0.0 && Q_load == 0.0) {
        throw std::invalid_argument("LoadParams: load must draw nonzero power");
    }
    if (P_load < 0.0) {
        throw std::invalid_argument("LoadParams: P_load must be >= 0");
    }
}

NortonEquivalent norton_equivalent(const GridParams& grid) {
    grid.validate();
    const double x = grid.reactance();
    return {grid.U / x, x};
}

PowerFlow transmitted_power(double I_0, double delta_1, const GridParams& grid) {
    if (!(I_0 >= 0.0)) throw std::invalid_argument("transmitted_power: I_0 must be >= 0");
    const double x = grid.reactance();
    return {grid.U * I_0 * std::sin(delta_1),
            I_0 * I_0 * x - grid.U * I_0 * std::cos(delta_1)};
}

TerminalVoltage terminal_voltage(double I_0, double delta_1, const GridParams& grid) {
    if (!(I_0 >= 0.0)) throw std::invalid_argument("terminal_voltage: I_0 must be >= 0");
    return {grid.U * std::sin(delta_1),
            grid.reactance() * I_0 - grid.U * std::cos(delta_1)};
}

double dual_power_angle(double delta_U) { return -delta_U + kPi / 2.0; }

double power_factor_angle(double P_E, double Q_E) {
    if (P_E == 0.0 && Q_E == 0.0) {
        throw std::invalid_argument("power_factor_angle: undefined at (0, 0)");
    }
    return std::atan2(Q_E, P_E);
}

OperatingPoint grid_operating_point(double I_0, double delta_1, const GridParams& grid) {
    const auto [v_d, v_q] = terminal_voltage(I_0, delta_1, grid);
    OperatingPoint op;
    op.V_d = v_d;
    op.V_q = v_q;
    op.V_mag = std::hypot(v_d, v_q);
    op.P_E = v_d * I_0;
    op.Q_E = v_q * I_0;
    op.phi = (op.P_E == 0.0 && op.Q_E == 0.0) ? 0.0 : std::atan2(op.Q_E, op.P_E);
    op.delta_1 = delta_1;
    return op;
}

OperatingPoint islanded_operating_point(double I_0, const LoadParams& load) {
    if (!(I_0 >= 0.0)) {
        throw std::invalid_argument("islanded_operating_point: I_0 must be >= 0");
    }
    load.validate();
    const std::complex<double> z = load.impedance();
    OperatingPoint op;
    op.V_d = z.real() * I_0;
    op.V_q = z.imag() * I_0;
    op.V_mag = std::abs(z) * I_0;
    op.P_E = z.real() * I_0 * I_0;
    op.Q_E = z.imag() * I_0 * I_0;
    op.phi = (op.P_E == 0.0 && op.Q_E == 0.0) ? 0.0 : std::atan2(op.Q_E, op.P_E);
    op.delta_1 = 0.0;
    return op;
}

}  // namespace dsglab
