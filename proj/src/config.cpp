#include "dsglab/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

namespace dsglab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    if (line <= 0) throw ConfigError("override: " + msg);
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, int line) {
    if (v.empty()) fail(line, "empty numeric value");
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || errno == ERANGE) {
        fail(line, "not a number: '" + v + "'");
    }
    return d;
}

struct EventDraft {
    std::optional<double> t;
    std::optional<std::string> kind;
    std::optional<double> value;  // U / P / V depending on kind
    std::string value_key;
    std::optional<double> load_p;
    std::optional<double> load_q;
};

struct Parser {
    Scenario sc{};
    bool has_load = false;
    LoadParams load{};
    std::map<std::size_t, EventDraft> events;

    void set(const std::string& key, const std::string& val, int line) {
        auto num = [&] { return parse_double(val, line); };

        if (key == "mode") {
            if (val == "grid") sc.mode0 = OperatingMode::GridConnected;
            else if (val == "island") sc.mode0 = OperatingMode::Islanded;
            else fail(line, "mode must be grid|island");
        } else if (key == "t_end") sc.t_end = num();
        else if (key == "dt") sc.dt = num();
        else if (key == "init") {
            if (val == "equilibrium") sc.init = InitPolicy::AtEquilibrium;
            else if (val == "explicit") sc.init = InitPolicy::Explicit;
            else fail(line, "init must be equilibrium|explicit");
        }
        else if (key == "grid.U") sc.grid.U = num();
        else if (key == "grid.X_line") sc.grid.X_line = num();
        else if (key == "grid.X_g") sc.grid.X_g = num();
        else if (key == "grid.f_base") sc.grid.f_base = num();
        else if (key == "dsg.K_p") sc.dsg.K_p = num();
        else if (key == "dsg.K_Q") sc.dsg.K_Q = num();
        else if (key == "dsg.K_V") sc.dsg.K_V = num();
        else if (key == "dsg.phi_0") sc.dsg.phi_0 = num();
        else if (key == "dsg.I_max") sc.dsg.I_max = num();
        else if (key == "dsg.I_nom") sc.dsg.I_nom = num();
        else if (key == "dsg.V_ref") sc.dsg.V_ref = num();
        else if (key == "dsg.P_ref") sc.dsg.P_ref = num();
        else if (key == "dsg.Q_ref") sc.dsg.Q_ref = num();
        else if (key == "dsg.sync") {
            if (val == "proportional") sc.dsg.sync = SyncKind::Proportional;
            else if (val == "inertial") sc.dsg.sync = SyncKind::Inertial;
            else fail(line, "dsg.sync must be proportional|inertial");
        }
        else if (key == "dsg.J") sc.dsg.J = num();
        else if (key == "dsg.D") sc.dsg.D = num();
        else if (key == "dsg.qv_input") {
            if (val == "voltage") sc.dsg.qv_input = QvInput::Voltage;
            else if (val == "reactive_power") sc.dsg.qv_input = QvInput::ReactivePower;
            else fail(line, "dsg.qv_input must be voltage|reactive_power");
        }
        else if (key == "dsg.qv_dyn") {
            if (val == "proportional") sc.dsg.qv_dyn = QvDynamics::Proportional;
            else if (val == "inertial") sc.dsg.qv_dyn = QvDynamics::Inertial;
            else fail(line, "dsg.qv_dyn must be proportional|inertial");
        }
        else if (key == "dsg.J_q") sc.dsg.J_q = num();
        else if (key == "dsg.D_q") sc.dsg.D_q = num();
        else if (key == "dsg.tau_i") sc.dsg.tau_i = num();
        else if (key == "dsg.hysteresis") sc.dsg.hysteresis = num();
        else if (key == "dsg.k_sec") sc.dsg.k_sec = num();
        else if (key == "load.P") { load.P_load = num(); has_load = true; }
        else if (key == "load.Q") { load.Q_load = num(); has_load = true; }
        else if (key == "init.delta_1") sc.init_state.delta_1 = num();
        else if (key == "init.d_omega") sc.init_state.d_omega = num();
        else if (key == "init.I_d") sc.init_state.I_d = num();
        else if (key == "init.qv_state") sc.init_state.qv_state = num();
        else if (key == "init.sec_state") sc.init_state.sec_state = num();
        else if (key.rfind("events[", 0) == 0) set_event(key, val, line);
        else fail(line, "unknown key '" + key + "'");
    }

    void set_event(const std::string& key, const std::string& val, int line) {
        const auto close = key.find("].");
        if (close == std::string::npos) fail(line, "malformed event key '" + key + "'");
        const std::string idx_str = key.substr(7, close - 7);
        char* end = nullptr;
        const long idx = std::strtol(idx_str.c_str(), &end, 10);
        if (end != idx_str.c_str() + idx_str.size() || idx < 0) {
            fail(line, "malformed event index '" + idx_str + "'");
        }
        EventDraft& ev = events[static_cast<std::size_t>(idx)];
        const std::string field = key.substr(close + 2);

        if (field == "t") ev.t = parse_double(val, line);
        else if (field == "kind") ev.kind = val;
        else if (field == "U" || field == "P" || field == "V") {
            if (ev.value) fail(line, "duplicate event value for events[" + idx_str + "]");
            ev.value = parse_double(val, line);
            ev.value_key = field;
        }
        else if (field == "load.P") ev.load_p = parse_double(val, line);
        else if (field == "load.Q") ev.load_q = parse_double(val, line);
        else fail(line, "unknown event field '" + field + "'");
    }

    Scenario finish() {
        if (has_load) sc.load = load;
        std::size_t expect = 0;
        for (const auto& [idx, ev] : events) {
            if (idx != expect++) {
                throw ConfigError("event indices must be contiguous from 0");
            }
            if (!ev.t) throw ConfigError("events[" + std::to_string(idx) + "]: missing t");
            if (!ev.kind) throw ConfigError("events[" + std::to_string(idx) + "]: missing kind");
            Event e;
            e.t = *ev.t;
            const std::string& k = *ev.kind;
            auto need_value = [&](const char* key) {
                if (!ev.value || ev.value_key != key) {
                    throw ConfigError("events[" + std::to_string(idx) + "]: " + k +
                                      " requires field '" + key + "'");
                }
                return *ev.value;
            };
            if (k == "grid_voltage_step") {
                e.kind = EventKind::GridVoltageStep;
                e.value = need_value("U");
            } else if (k == "power_ref_step") {
                e.kind = EventKind::PowerRefStep;
                e.value = need_value("P");
            } else if (k == "voltage_ref_step") {
                e.kind = EventKind::VoltageRefStep;
                e.value = need_value("V");
            } else if (k == "switch_to_island") {
                e.kind = EventKind::SwitchToIsland;
                if (!ev.load_p || !ev.load_q) {
                    throw ConfigError("events[" + std::to_string(idx) +
                                      "]: switch_to_island requires load.P and load.Q");
                }
                e.load = {*ev.load_p, *ev.load_q};
            } else if (k == "reconnect_to_grid") {
                e.kind = EventKind::ReconnectToGrid;
            } else {
                throw ConfigError("events[" + std::to_string(idx) + "]: unknown kind '" + k + "'");
            }
            if (e.kind != EventKind::SwitchToIsland && (ev.load_p || ev.load_q)) {
                throw ConfigError("events[" + std::to_string(idx) + "]: load fields only apply to switch_to_island");
            }
            if (e.kind == EventKind::SwitchToIsland || e.kind == EventKind::ReconnectToGrid) {
                if (ev.value) {
                    throw ConfigError("events[" + std::to_string(idx) + "]: unexpected value field");
                }
            }
            sc.events.push_back(e);
        }
        try {
            sc.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("invalid scenario: ") + e.what());
        }
        return sc;
    }
};

// shortest decimal form that parses back to the same double
std::string fmt(double v) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace

Scenario parse_config(const std::string& text) {
    Parser parser;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        parser.set(key, val, line_no);
    }
    return parser.finish();
}

std::string serialize_config(const Scenario& s) {
    std::ostringstream out;
    out << "mode = " << (s.mode0 == OperatingMode::GridConnected ? "grid" : "island") << '\n';
    out << "t_end = " << fmt(s.t_end) << '\n';
    out << "dt = " << fmt(s.dt) << '\n';
    out << "init = " << (s.init == InitPolicy::AtEquilibrium ? "equilibrium" : "explicit") << '\n';
    out << "grid.U = " << fmt(s.grid.U) << '\n';
    out << "grid.X_line = " << fmt(s.grid.X_line) << '\n';
    out << "grid.X_g = " << fmt(s.grid.X_g) << '\n';
    out << "grid.f_base = " << fmt(s.grid.f_base) << '\n';
    out << "dsg.K_p = " << fmt(s.dsg.K_p) << '\n';
    out << "dsg.K_Q = " << fmt(s.dsg.K_Q) << '\n';
    out << "dsg.K_V = " << fmt(s.dsg.K_V) << '\n';
    out << "dsg.phi_0 = " << fmt(s.dsg.phi_0) << '\n';
    out << "dsg.I_max = " << fmt(s.dsg.I_max) << '\n';
    out << "dsg.I_nom = " << fmt(s.dsg.I_nom) << '\n';
    out << "dsg.V_ref = " << fmt(s.dsg.V_ref) << '\n';
    out << "dsg.P_ref = " << fmt(s.dsg.P_ref) << '\n';
    out << "dsg.Q_ref = " << fmt(s.dsg.Q_ref) << '\n';
    out << "dsg.sync = " << (s.dsg.sync == SyncKind::Proportional ? "proportional" : "inertial") << '\n';
    out << "dsg.J = " << fmt(s.dsg.J) << '\n';
    out << "dsg.D = " << fmt(s.dsg.D) << '\n';
    out << "dsg.qv_input = " << (s.dsg.qv_input == QvInput::Voltage ? "voltage" : "reactive_power") << '\n';
    out << "dsg.qv_dyn = " << (s.dsg.qv_dyn == QvDynamics::Proportional ? "proportional" : "inertial") << '\n';
    out << "dsg.J_q = " << fmt(s.dsg.J_q) << '\n';
    out << "dsg.D_q = " << fmt(s.dsg.D_q) << '\n';
    out << "dsg.tau_i = " << fmt(s.dsg.tau_i) << '\n';
    out << "dsg.hysteresis = " << fmt(s.dsg.hysteresis) << '\n';
    out << "dsg.k_sec = " << fmt(s.dsg.k_sec) << '\n';
    if (s.load) {
        out << "load.P = " << fmt(s.load->P_load) << '\n';
        out << "load.Q = " << fmt(s.load->Q_load) << '\n';
    }
    if (s.init == InitPolicy::Explicit) {
        out << "init.delta_1 = " << fmt(s.init_state.delta_1) << '\n';
        out << "init.d_omega = " << fmt(s.init_state.d_omega) << '\n';
        out << "init.I_d = " << fmt(s.init_state.I_d) << '\n';
        out << "init.qv_state = " << fmt(s.init_state.qv_state) << '\n';
        out << "init.sec_state = " << fmt(s.init_state.sec_state) << '\n';
    }
    for (std::size_t i = 0; i < s.events.size(); ++i) {
        const Event& e = s.events[i];
        const std::string pre = "events[" + std::to_string(i) + "].";
        out << pre << "t = " << fmt(e.t) << '\n';
        switch (e.kind) {
            case EventKind::GridVoltageStep:
                out << pre << "kind = grid_voltage_step\n";
                out << pre << "U = " << fmt(e.value) << '\n';
                break;
            case EventKind::PowerRefStep:
                out << pre << "kind = power_ref_step\n";
                out << pre << "P = " << fmt(e.value) << '\n';
                break;
            case EventKind::VoltageRefStep:
                out << pre << "kind = voltage_ref_step\n";
                out << pre << "V = " << fmt(e.value) << '\n';
                break;
            case EventKind::SwitchToIsland:
                out << pre << "kind = switch_to_island\n";
                out << pre << "load.P = " << fmt(e.load.P_load) << '\n';
                out << pre << "load.Q = " << fmt(e.load.Q_load) << '\n';
                break;
            case EventKind::ReconnectToGrid:
                out << pre << "kind = reconnect_to_grid\n";
                break;
        }
    }
    return out.str();
}

void apply_override(Scenario& scenario, const std::string& key, const std::string& value) {
    Parser parser;
    parser.sc = scenario;
    if (scenario.load) {
        parser.load = *scenario.load;
        parser.has_load = true;
    }
    parser.set(trim(key), trim(value), 0);
    // re-validate the full scenario with the override applied
    Scenario next = parser.sc;
    if (parser.has_load) next.load = parser.load;
    if (!parser.events.empty()) {
        throw ConfigError("overrides cannot add events");
    }
    try {
        next.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid scenario: ") + e.what());
    }
    scenario = next;
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = {"fig4", "fig5a", "fig5b",
                                                   "fig6a", "fig6b", "fig8"};
    return names;
}

namespace {

// Shared rig for the grid-connected experiments. The 2 ms first-order lag
// stands in for the inner current loop.
Scenario grid_rig() {
    Scenario s;
    s.dsg.tau_i = 2e-3;
    s.dt = 1e-4;
    return s;
}

Scenario make_fig4() {
    Scenario s = grid_rig();
    s.dsg.P_ref = 0.3;
    s.dsg.I_nom = 1.05;  // rated-current operation so the 1.05 pu step is reachable
    s.dsg.K_Q = 0.0;
    s.t_end = 11.0;
    s.events = {{2.0, EventKind::PowerRefStep, 0.5, {}},
                {4.0, EventKind::PowerRefStep, 0.7, {}},
                {6.0, EventKind::PowerRefStep, 1.0, {}},
                {8.0, EventKind::PowerRefStep, 1.05, {}}};
    return s;
}

Scenario make_fig5(bool braking) {
    Scenario s = grid_rig();
    s.dsg.P_ref = 0.8;
    s.dsg.K_Q = braking ? 0.06 : 0.0;
    s.t_end = 6.0;
    s.events = {{1.0, EventKind::GridVoltageStep, 0.8, {}},
                {3.5, EventKind::GridVoltageStep, 1.0, {}}};
    return s;
}

Scenario make_fig6(bool braking) {
    Scenario s = make_fig5(braking);
    s.events[0].value = 0.6;
    return s;
}

Scenario make_fig8() {
    Scenario s;
    s.mode0 = OperatingMode::Islanded;
    s.load = LoadParams{1.0, 0.2};
    s.dsg.P_ref = 1.0;
    s.dsg.K_Q = 0.0;  // braking synchronizes against a grid; no grid here
    s.dsg.tau_i = 2e-3;
    s.t_end = 10.0;
    s.dt = 1e-4;
    return s;
}

}  // namespace

Scenario builtin_scenario(const std::string& name) {
    if (name == "fig4") return make_fig4();
    if (name == "fig5a") return make_fig5(false);
    if (name == "fig5b") return make_fig5(true);
    if (name == "fig6a") return make_fig6(false);
    if (name == "fig6b") return make_fig6(true);
    if (name == "fig8") return make_fig8();
    throw ConfigError("unknown built-in scenario '" + name + "'");
}

bool operator==(const Scenario& a, const Scenario& b) {
    return serialize_config(a) == serialize_config(b);
}

}  // namespace dsglab
