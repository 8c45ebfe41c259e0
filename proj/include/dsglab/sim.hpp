#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "dsglab/scenario.hpp"
#include "dsglab/timeseries.hpp"

namespace dsglab {

/// Numerical failure during integration (non-finite state, divergent
/// algebraic loop). Loss of synchronization is NOT an error; it is
/// recorded data.
struct SimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fixed-step classical 4th-order integration of the closed-loop system
/// with the scenario's event schedule. State updates use compensated
/// summation, so runs are deterministic and step-size studies stay above
/// the round-off floor. Algebraic quantities are recomputed from the
/// circuit model at every evaluation, never integrated.
TimeSeries integrate(const Scenario& scenario);

/// Pre-disturbance steady state for the scenario's initial condition
/// (braking off): delta_1 at the stable root of the closed-loop power
/// curve, zero frequency deviation, current loop settled, integrators
/// zeroed. Throws SimError("no pre-disturbance equilibrium") when the
/// reference exceeds the curve peak.
DsgState initial_equilibrium(const Scenario& scenario);

struct ColumnStats {
    double mean;
    double max_deviation;  ///< max |x - mean| over the window
};

/// Statistics over the trailing `window` seconds of a trajectory, one
/// entry per TimeSeries column. Rejects an empty or oversized window.
std::array<ColumnStats, TimeSeries::kNumColumns> steady_state_metrics(
    const TimeSeries& ts, double window);

}  // namespace dsglab
