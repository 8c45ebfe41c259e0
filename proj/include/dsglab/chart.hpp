#pragma once

#include <string>
#include <vector>

#include "dsglab/stability.hpp"
#include "dsglab/timeseries.hpp"

namespace dsglab {

struct ChartSeries {
    std::string name;
    std::vector<double> y;
};

struct ChartData {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<double> x;
    std::vector<ChartSeries> series;
};

/// Renders a self-contained SVG line chart: axes with tick labels, one
/// polyline per series, a legend when more than one series is shown.
/// Rejects empty data.
void emit_chart(const ChartData& data, const std::string& path);

/// Chart of selected trajectory columns (by TimeSeries column name) over time.
ChartData chart_from_timeseries(const TimeSeries& ts,
                                const std::vector<std::string>& columns,
                                const std::string& title);

ChartData chart_from_curve(const std::vector<CurvePoint>& curve,
                           const std::string& name, const std::string& title);

}  // namespace dsglab
