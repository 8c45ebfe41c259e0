#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace dsglab {

/// Recorded trajectory on a uniform time grid. All columns share the same
/// length; per-unit except t [s] and freq [Hz]. delta_1 is cumulative
/// (unwrapped) so pole slips are visible in the data.
struct TimeSeries {
    std::vector<double> t;
    std::vector<double> delta_1;
    std::vector<double> freq;
    std::vector<double> p_e;
    std::vector<double> q_e;
    std::vector<double> v_mag;
    std::vector<double> i_d;
    std::vector<double> sign;
    std::vector<double> s;

    static constexpr std::size_t kNumColumns = 9;
    static constexpr std::array<const char*, kNumColumns> kColumnNames = {
        "t", "delta_1", "freq", "P_E", "Q_E", "V_mag", "I_d", "sign", "S"};

    [[nodiscard]] std::size_t size() const { return t.size(); }
    [[nodiscard]] bool empty() const { return t.empty(); }

    void reserve(std::size_t n) {
        for (std::size_t i = 0; i < kNumColumns; ++i) column(i).reserve(n);
    }

    void push_row(double t_, double delta_1_, double freq_, double p_e_, double q_e_,
                  double v_mag_, double i_d_, double sign_, double s_) {
        t.push_back(t_);
        delta_1.push_back(delta_1_);
        freq.push_back(freq_);
        p_e.push_back(p_e_);
        q_e.push_back(q_e_);
        v_mag.push_back(v_mag_);
        i_d.push_back(i_d_);
        sign.push_back(sign_);
        s.push_back(s_);
    }

    [[nodiscard]] std::vector<double>& column(std::size_t i) {
        switch (i) {
            case 0: return t;
            case 1: return delta_1;
            case 2: return freq;
            case 3: return p_e;
            case 4: return q_e;
            case 5: return v_mag;
            case 6: return i_d;
            case 7: return sign;
            case 8: return s;
        }
        throw std::out_of_range("TimeSeries: column index");
    }

    [[nodiscard]] const std::vector<double>& column(std::size_t i) const {
        return const_cast<TimeSeries*>(this)->column(i);
    }
};

}  // namespace dsglab
