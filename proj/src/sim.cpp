#include "dsglab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "dsglab/stability.hpp"

namespace dsglab {

namespace {

bool grid_aligned(double t, double dt) {
    const double steps = t / dt;
    return std::abs(steps - std::round(steps)) < 1e-6;
}

// delta_1, d_omega, I_d, qv_state, sec_state
using StateVec = std::array<double, 5>;

StateVec to_vec(const DsgState& s) {
    return {s.delta_1, s.d_omega, s.I_d, s.qv_state, s.sec_state};
}

DsgState to_state(const StateVec& v) {
    return {v[0], v[1], v[2], v[3], v[4]};
}

struct LoopSignals {
    OperatingPoint op;
    double i_d;
    int sign;
    double d_omega;
    double s;  // effective accelerating-power curve value
};

class Integrator {
public:
    explicit Integrator(const Scenario& sc)
        : grid_(sc.grid), dsg_(sc.dsg), mode_(sc.mode0) {
        if (sc.load) load_ = *sc.load;
    }

    void apply(const Event& ev) {
        switch (ev.kind) {
            case EventKind::GridVoltageStep: grid_.U = ev.value; break;
            case EventKind::PowerRefStep: dsg_.P_ref = ev.value; break;
            case EventKind::VoltageRefStep: dsg_.V_ref = ev.value; break;
            case EventKind::SwitchToIsland:
                mode_ = OperatingMode::Islanded;
                load_ = ev.load;
                break;
            case EventKind::ReconnectToGrid: mode_ = OperatingMode::GridConnected; break;
        }
    }

    [[nodiscard]] OperatingPoint circuit_point(double delta, double i) const {
        return mode_ == OperatingMode::GridConnected
                   ? grid_operating_point(i, delta, grid_)
                   : islanded_operating_point(i, load_);
    }

    // Algebraic current when no lag state exists. The proportional droop
    // closes through V (or Q), a contraction with factor K_V * dV/dI, so a
    // plain fixed-point iteration converges in a handful of rounds.
    [[nodiscard]] double resolve_current(double delta, double qv, double sec) const {
        if (dsg_.qv_dyn == QvDynamics::Inertial) {
            return std::clamp(dsg_.I_nom + sec + qv, 0.0, dsg_.I_max);
        }
        double i = std::clamp(dsg_.I_nom + sec, 0.0, dsg_.I_max);
        for (int it = 0; it < 100; ++it) {
            const OperatingPoint op = circuit_point(delta, i);
            const double next = current_reference(op.V_mag, op.Q_E, dsg_, qv, sec);
            if (std::abs(next - i) <= 1e-14) return next;
            i = next;
        }
        throw SimError("current droop fixed point did not converge");
    }

    [[nodiscard]] LoopSignals signals(const DsgState& s, int latch) const {
        LoopSignals sig;
        sig.i_d = dsg_.tau_i > 0.0 ? s.I_d : resolve_current(s.delta_1, s.qv_state, s.sec_state);
        sig.op = circuit_point(s.delta_1, sig.i_d);
        if (dsg_.hysteresis > 0.0) {
            sig.sign = latch;
        } else {
            sig.sign = (sig.op.P_E == 0.0 && sig.op.Q_E == 0.0)
                           ? 0
                           : braking_sign(sig.op.P_E, sig.op.Q_E, dsg_.phi_0);
        }
        sig.d_omega = dsg_.sync == SyncKind::Proportional
                          ? frequency_deviation(sig.op.P_E, sig.op.V_q, sig.sign, dsg_)
                          : s.d_omega;
        const double k_pl = dsg_.sync == SyncKind::Proportional ? dsg_.K_Q / dsg_.K_p : dsg_.K_Q;
        sig.s = sig.op.P_E + sig.sign * k_pl * sig.op.V_q;
        return sig;
    }

    [[nodiscard]] StateVec derivatives(const StateVec& v, int latch) const {
        const DsgState s = to_state(v);
        const LoopSignals sig = signals(s, latch);
        StateVec d{};
        d[0] = delta_dot(sig.d_omega, grid_.f_base);
        if (dsg_.sync == SyncKind::Inertial) {
            d[1] = inertial_sync_derivative(sig.op.P_E, sig.op.V_q, sig.sign, s.d_omega, dsg_);
        }
        if (dsg_.tau_i > 0.0) {
            const double ref = current_reference(sig.op.V_mag, sig.op.Q_E, dsg_,
                                                 s.qv_state, s.sec_state);
            d[2] = current_lag_derivative(s.I_d, ref, dsg_.tau_i);
        }
        if (dsg_.qv_dyn == QvDynamics::Inertial) {
            const double err = qv_error(sig.op.V_mag, sig.op.Q_E, dsg_);
            double dqv = qv_state_derivative(err, s.qv_state, dsg_);
            const double ref = current_reference_unclamped(sig.op.V_mag, sig.op.Q_E, dsg_,
                                                           s.qv_state, s.sec_state);
            if ((ref >= dsg_.I_max && dqv > 0.0) || (ref <= 0.0 && dqv < 0.0)) dqv = 0.0;
            d[3] = dqv;
        }
        if (mode_ == OperatingMode::Islanded) {
            d[4] = secondary_control_derivative(sig.op.V_mag, sig.op.Q_E, dsg_, s);
        }
        return d;
    }

    void rk4_step(StateVec& y, StateVec& comp, double dt, int latch) const {
        const StateVec k1 = derivatives(y, latch);
        StateVec tmp;
        for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * dt * k1[j];
        const StateVec k2 = derivatives(tmp, latch);
        for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + 0.5 * dt * k2[j];
        const StateVec k3 = derivatives(tmp, latch);
        for (std::size_t j = 0; j < y.size(); ++j) tmp[j] = y[j] + dt * k3[j];
        const StateVec k4 = derivatives(tmp, latch);
        for (std::size_t j = 0; j < y.size(); ++j) {
            const double inc = dt * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) / 6.0;
            // Kahan-compensated accumulation
            const double adj = inc - comp[j];
            const double sum = y[j] + adj;
            comp[j] = (sum - y[j]) - adj;
            y[j] = sum;
        }
    }

    [[nodiscard]] int update_latch(int latch, double phi) const {
        if (latch != 0) return phi >= dsg_.phi_0 - dsg_.hysteresis ? 1 : 0;
        return phi >= dsg_.phi_0 ? 1 : 0;
    }

    [[nodiscard]] const DsgParams& dsg() const { return dsg_; }
    [[nodiscard]] const GridParams& grid() const { return grid_; }
    [[nodiscard]] OperatingMode mode() const { return mode_; }

private:
    GridParams grid_;
    DsgParams dsg_;
    OperatingMode mode_;
    LoadParams load_{};
};

}  // namespace

void Scenario::validate() const {
    grid.validate();
    dsg.validate();
    if (!(dt > 0.0 && dt <= 1e-3)) {
        throw std::invalid_argument("Scenario: dt must lie in (0, 1e-3]");
    }
    if (!(t_end > 0.0)) throw std::invalid_argument("Scenario: t_end must be > 0");
    if (!grid_aligned(t_end, dt)) {
        throw std::invalid_argument("Scenario: t_end must fall on the dt grid");
    }
    double prev = -1.0;
    for (const auto& ev : events) {
        if (!(ev.t >= 0.0)) throw std::invalid_argument("Scenario: event time must be >= 0");
        if (!(ev.t > prev)) {
            throw std::invalid_argument("Scenario: event times must be strictly increasing");
        }
        if (!(ev.t < t_end)) {
            throw std::invalid_argument("Scenario: event times must lie before t_end");
        }
        if (!grid_aligned(ev.t, dt)) {
            throw std::invalid_argument("Scenario: event times must fall on the dt grid");
        }
        prev = ev.t;
        switch (ev.kind) {
            case EventKind::GridVoltageStep:
                if (!(ev.value >= 0.0) || !std::isfinite(ev.value)) {
                    throw std::invalid_argument("Scenario: voltage step must be >= 0");
                }
                break;
            case EventKind::PowerRefStep:
            case EventKind::VoltageRefStep:
                if (!std::isfinite(ev.value)) {
                    throw std::invalid_argument("Scenario: step value must be finite");
                }
                break;
            case EventKind::SwitchToIsland:
                ev.load.validate();
                break;
            case EventKind::ReconnectToGrid: break;
        }
    }
    if (mode0 == OperatingMode::Islanded && !load) {
        throw std::invalid_argument("Scenario: islanded start requires a load");
    }
    if (load) load->validate();
    if (init == InitPolicy::Explicit) {
        if (!(init_state.I_d >= 0.0 && init_state.I_d <= dsg.I_max)) {
            throw std::invalid_argument("Scenario: explicit I_d must lie in [0, I_max]");
        }
    }
}

DsgState initial_equilibrium(const Scenario& scenario) {
    Integrator integ(scenario);
    const DsgParams& p = scenario.dsg;
    const bool qv_inertial = p.qv_dyn == QvDynamics::Inertial;
    if (qv_inertial && !(p.D_q > 0.0)) {
        throw SimError(
            "initial_equilibrium: the inertial Q/V regulator needs D_q > 0 for a "
            "quiescent point; use an explicit initial state");
    }
    // quasi-steady loop gain of the current-magnitude regulator
    const double gain = qv_inertial ? 1.0 / p.D_q : p.K_V;

    auto settled_current = [&](double delta) {
        double i = std::clamp(p.I_nom, 0.0, p.I_max);
        for (int it = 0; it < 200; ++it) {
            const OperatingPoint op = integ.circuit_point(delta, i);
            const double next =
                std::clamp(p.I_nom + gain * qv_error(op.V_mag, op.Q_E, p), 0.0, p.I_max);
            if (std::abs(next - i) <= 1e-14) return next;
            i = next;
        }
        throw SimError("initial_equilibrium: current droop fixed point did not converge");
    };
    auto make_state = [&](double delta) {
        DsgState s{};
        s.delta_1 = delta;
        s.I_d = settled_current(delta);
        if (qv_inertial) {
            const OperatingPoint op = integ.circuit_point(delta, s.I_d);
            // rails mirror the anti-windup freeze of the running regulator
            s.qv_state = std::clamp(qv_error(op.V_mag, op.Q_E, p) / p.D_q, -p.I_nom,
                                    p.I_max - p.I_nom);
        }
        return s;
    };

    if (scenario.mode0 == OperatingMode::Islanded) return make_state(0.0);

    // closed-loop power curve with the regulator-consistent current, braking off
    auto curve = [&](double d) { return integ.circuit_point(d, settled_current(d)).P_E; };
    auto slope = [&](double d) {
        const double h = 1e-6;
        return (curve(d + h) - curve(d - h)) / (2.0 * h);
    };
    const auto roots = find_curve_equilibria(curve, slope, p.P_ref, 0.0);

    const Equilibrium* best = nullptr;
    for (const auto& r : roots) {
        if (!r.stable) continue;
        if (best == nullptr || std::abs(r.delta_1) < std::abs(best->delta_1)) best = &r;
    }
    if (best == nullptr) {
        throw SimError("initial_equilibrium: no pre-disturbance equilibrium");
    }
    return make_state(best->delta_1);
}

TimeSeries integrate(const Scenario& scenario) {
    scenario.validate();
    Integrator integ(scenario);

    DsgState s0 = scenario.init == InitPolicy::AtEquilibrium ? initial_equilibrium(scenario)
                                                             : scenario.init_state;
    if (scenario.dsg.tau_i == 0.0 && scenario.init == InitPolicy::Explicit) {
        s0.I_d = integ.resolve_current(s0.delta_1, s0.qv_state, s0.sec_state);
    }

    const double dt = scenario.dt;
    const auto n_steps = static_cast<std::size_t>(std::llround(scenario.t_end / dt));

    // event schedule by step index
    std::vector<std::pair<std::size_t, const Event*>> schedule;
    schedule.reserve(scenario.events.size());
    for (const auto& ev : scenario.events) {
        schedule.emplace_back(static_cast<std::size_t>(std::llround(ev.t / dt)), &ev);
    }

    StateVec y = to_vec(s0);
    StateVec comp{};
    int latch = 0;
    if (scenario.dsg.hysteresis > 0.0) {
        const LoopSignals sig = integ.signals(to_state(y), 0);
        if (!(sig.op.P_E == 0.0 && sig.op.Q_E == 0.0)) {
            latch = integ.update_latch(0, sig.op.phi);
        }
    }

    TimeSeries ts;
    ts.reserve(n_steps + 1);
    std::size_t next_ev = 0;

    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        while (next_ev < schedule.size() && schedule[next_ev].first == k) {
            integ.apply(*schedule[next_ev].second);
            ++next_ev;
        }

        for (double v : y) {
            if (!std::isfinite(v)) {
                throw SimError("integrate: non-finite state at t = " + std::to_string(t));
            }
        }

        const DsgState s = to_state(y);
        LoopSignals sig = integ.signals(s, latch);
        if (integ.dsg().hysteresis > 0.0 &&
            !(sig.op.P_E == 0.0 && sig.op.Q_E == 0.0)) {
            const int updated = integ.update_latch(latch, sig.op.phi);
            if (updated != latch) {
                latch = updated;
                sig = integ.signals(s, latch);
            }
        }

        ts.push_row(t, s.delta_1, integ.grid().f_base * (1.0 + sig.d_omega), sig.op.P_E,
                    sig.op.Q_E, sig.op.V_mag, sig.i_d, static_cast<double>(sig.sign), sig.s);

        if (k < n_steps) {
            try {
                integ.rk4_step(y, comp, dt, latch);
            } catch (const std::invalid_argument&) {
                // a diverged state fails the circuit-model preconditions mid-stage
                throw SimError("integrate: non-finite state at t = " + std::to_string(t));
            }
        }
    }
    return ts;
}

std::array<ColumnStats, TimeSeries::kNumColumns> steady_state_metrics(const TimeSeries& ts,
                                                                      double window) {
    if (ts.empty()) throw std::invalid_argument("steady_state_metrics: empty trajectory");
    if (!(window > 0.0)) throw std::invalid_argument("steady_state_metrics: window must be > 0");
    const double t_last = ts.t.back();
    const double t_first = ts.t.front();
    if (window > t_last - t_first + 1e-12) {
        throw std::invalid_argument("steady_state_metrics: window exceeds trace length");
    }
    std::size_t i0 = ts.size();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts.t[i] >= t_last - window - 1e-12) {
            i0 = i;
            break;
        }
    }

    std::array<ColumnStats, TimeSeries::kNumColumns> out{};
    for (std::size_t c = 0; c < TimeSeries::kNumColumns; ++c) {
        const auto& col = ts.column(c);
        double sum = 0.0;
        for (std::size_t i = i0; i < col.size(); ++i) sum += col[i];
        const double mean = sum / static_cast<double>(col.size() - i0);
        double dev = 0.0;
        for (std::size_t i = i0; i < col.size(); ++i) {
            dev = std::max(dev, std::abs(col[i] - mean));
        }
        out[c] = {mean, dev};
    }
    return out;
}

}  // namespace dsglab
