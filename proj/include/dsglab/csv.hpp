#pragma once

#include <string>

#include "dsglab/timeseries.hpp"

namespace dsglab {

/// Writes the trajectory as CSV: header `t,delta_1,freq,P_E,Q_E,V_mag,I_d,sign,S`,
/// 17 significant digits, LF line endings. I/O failures are reported with
/// the path in the message.
void write_timeseries(const TimeSeries& ts, const std::string& path);

/// Strict reader for the format produced by write_timeseries.
TimeSeries read_timeseries(const std::string& path);

}  // namespace dsglab
