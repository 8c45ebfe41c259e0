#include "dsglab/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dsglab {

namespace {
const char* kHeader = "t,delta_1,freq,P_E,Q_E,V_mag,I_d,sign,S";
}

void write_timeseries(const TimeSeries& ts, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: keep LF endings everywhere
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << kHeader << '\n';
    char buf[32];
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t c = 0; c < TimeSeries::kNumColumns; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", ts.column(c)[i]);
            if (c != 0) out << ',';
            out << buf;
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error(path + ": write failed");
}

TimeSeries read_timeseries(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw std::runtime_error(path + ": unexpected CSV header");

    TimeSeries ts;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::array<double, TimeSeries::kNumColumns> row{};
        const char* p = line.c_str();
        for (std::size_t c = 0; c < TimeSeries::kNumColumns; ++c) {
            char* end = nullptr;
            row[c] = std::strtod(p, &end);
            if (end == p) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": malformed field");
            }
            p = end;
            if (c + 1 < TimeSeries::kNumColumns) {
                if (*p != ',') {
                    throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                             ": expected ','");
                }
                ++p;
            }
        }
        ts.push_row(row[0], row[1], row[2], row[3], row[4], row[5], row[6], row[7], row[8]);
    }
    return ts;
}

}  // namespace dsglab
