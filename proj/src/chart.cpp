#include "dsglab/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <stdexcept>

namespace dsglab {

namespace {

constexpr int kWidth = 960;
constexpr int kHeight = 540;
constexpr int kMarginL = 70;
constexpr int kMarginR = 24;
constexpr int kMarginT = 40;
constexpr int kMarginB = 52;
constexpr std::size_t kMaxPoints = 4000;  // polylines are decimated beyond this

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void emit_chart(const ChartData& data, const std::string& path) {
    if (data.x.empty() || data.series.empty()) {
        throw std::invalid_argument("emit_chart: empty data");
    }
    for (const auto& s : data.series) {
        if (s.y.size() != data.x.size()) {
            throw std::invalid_argument("emit_chart: series length mismatch");
        }
    }

    double x_min = data.x.front(), x_max = data.x.front();
    for (double v : data.x) { x_min = std::min(x_min, v); x_max = std::max(x_max, v); }
    double y_min = std::numeric_limits<double>::infinity(), y_max = -y_min;
    for (const auto& s : data.series) {
        for (double v : s.y) { y_min = std::min(y_min, v); y_max = std::max(y_max, v); }
    }
    if (x_max == x_min) { x_min -= 1.0; x_max += 1.0; }
    if (y_max == y_min) { y_min -= 1.0; y_max += 1.0; }
    const double y_pad = 0.05 * (y_max - y_min);
    y_min -= y_pad;
    y_max += y_pad;

    const double plot_w = kWidth - kMarginL - kMarginR;
    const double plot_h = kHeight - kMarginT - kMarginB;
    auto px = [&](double x) { return kMarginL + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return kMarginT + (y_max - y) / (y_max - y_min) * plot_h; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" << data.title << "</text>\n";

    // gridlines and tick labels
    const int n_ticks = 6;
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
    for (int i = 0; i <= n_ticks; ++i) {
        const double xv = x_min + (x_max - x_min) * i / n_ticks;
        const double yv = y_min + (y_max - y_min) * i / n_ticks;
        out << "<line x1=\"" << px(xv) << "\" y1=\"" << kMarginT << "\" x2=\"" << px(xv)
            << "\" y2=\"" << kMarginT + plot_h << "\" stroke=\"#ddd\"/>\n";
        out << "<line x1=\"" << kMarginL << "\" y1=\"" << py(yv) << "\" x2=\""
            << kMarginL + plot_w << "\" y2=\"" << py(yv) << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << px(xv) << "\" y=\"" << kHeight - kMarginB + 16
            << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
        out << "<text x=\"" << kMarginL - 6 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
    }
    out << "</g>\n";

    out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333\"/>\n";

    const std::size_t stride = std::max<std::size_t>(1, data.x.size() / kMaxPoints);
    for (std::size_t si = 0; si < data.series.size(); ++si) {
        const auto& s = data.series[si];
        out << "<polyline fill=\"none\" stroke=\""
            << kPalette[si % std::size(kPalette)] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < data.x.size(); i += stride) {
            out << num(px(data.x[i])) << ',' << num(py(s.y[i])) << ' ';
        }
        if ((data.x.size() - 1) % stride != 0) {
            out << num(px(data.x.back())) << ',' << num(py(s.y.back()));
        }
        out << "\"/>\n";
    }

    if (data.series.size() > 1) {
        const double lx = kMarginL + plot_w - 150;
        double ly = kMarginT + 10;
        out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
        for (std::size_t si = 0; si < data.series.size(); ++si) {
            out << "<line x1=\"" << lx << "\" y1=\"" << ly + 4 << "\" x2=\"" << lx + 24
                << "\" y2=\"" << ly + 4 << "\" stroke=\"" << kPalette[si % std::size(kPalette)]
                << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 8 << "\">"
                << data.series[si].name << "</text>\n";
            ly += 18;
        }
        out << "</g>\n";
    }

    out << "<text x=\"" << kMarginL + plot_w / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << data.x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << kMarginT + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 16 " << kMarginT + plot_h / 2 << ")\">"
        << data.y_label << "</text>\n";
    out << "</svg>\n";
    if (!out) throw std::runtime_error(path + ": write failed");
}

ChartData chart_from_timeseries(const TimeSeries& ts,
                                const std::vector<std::string>& columns,
                                const std::string& title) {
    if (ts.empty()) throw std::invalid_argument("chart_from_timeseries: empty trajectory");
    ChartData data;
    data.title = title;
    data.x_label = "t [s]";
    data.y_label = columns.size() == 1 ? columns.front() : "value";
    data.x = ts.t;
    for (const auto& name : columns) {
        std::size_t idx = TimeSeries::kNumColumns;
        for (std::size_t c = 0; c < TimeSeries::kNumColumns; ++c) {
            if (name == TimeSeries::kColumnNames[c]) { idx = c; break; }
        }
        if (idx == TimeSeries::kNumColumns || idx == 0) {
            throw std::invalid_argument("chart_from_timeseries: unknown column '" + name + "'");
        }
        data.series.push_back({name, ts.column(idx)});
    }
    return data;
}

ChartData chart_from_curve(const std::vector<CurvePoint>& curve, const std::string& name,
                           const std::string& title) {
    if (curve.empty()) throw std::invalid_argument("chart_from_curve: empty curve");
    ChartData data;
    data.title = title;
    data.x_label = "delta_1 [rad]";
    data.y_label = name + " [pu]";
    ChartSeries s{name, {}};
    for (const auto& p : curve) {
        data.x.push_back(p.delta_1);
        s.y.push_back(p.value);
    }
    data.series.push_back(std::move(s));
    return data;
}

}  // namespace dsglab
