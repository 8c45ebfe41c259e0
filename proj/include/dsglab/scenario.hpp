#pragma once

#include <optional>
#include <vector>

#include "dsglab/circuit.hpp"
#include "dsglab/control.hpp"

namespace dsglab {

enum class EventKind {
    GridVoltageStep,   ///< value = new U [pu]
    PowerRefStep,      ///< value = new P_ref [pu]
    VoltageRefStep,    ///< value = new V_ref [pu]
    SwitchToIsland,    ///< load = island load
    ReconnectToGrid,
};

struct Event {
    double t = 0.0;
    EventKind kind = EventKind::GridVoltageStep;
    double value = 0.0;
    LoadParams load{};
};

enum class OperatingMode { GridConnected, Islanded };

enum class InitPolicy { AtEquilibrium, Explicit };

/// A timed experiment: parameter set, disturbance schedule and horizon.
/// Event times must be strictly increasing, lie before t_end and fall on
/// the integration grid (events are applied atomically between steps).
struct Scenario {
    GridParams grid{};
    DsgParams dsg{};
    std::optional<LoadParams> load;  ///< required when islanded at any point
    std::vector<Event> events;
    double t_end = 2.0;
    double dt = 1e-4;
    OperatingMode mode0 = OperatingMode::GridConnected;
    InitPolicy init = InitPolicy::AtEquilibrium;
    DsgState init_state{};  ///< used when init == Explicit

    void validate() const;
};

}  // namespace dsglab
