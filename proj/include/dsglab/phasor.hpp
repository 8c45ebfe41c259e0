#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace dsglab {

/// Complex per-unit quantity in rectangular form. Both components are
/// required to be finite; the constructor rejects NaN/Inf.
struct Phasor {
    double re = 0.0;
    double im = 0.0;

    Phasor() = default;
    Phasor(double re_, double im_) : re(re_), im(im_) {
        if (!std::isfinite(re) || !std::isfinite(im)) {
            throw std::invalid_argument("Phasor components must be finite");
        }
    }

    static Phasor polar(double magnitude, double angle) {
        return {magnitude * std::cos(angle), magnitude * std::sin(angle)};
    }

    [[nodiscard]] double magnitude() const { return std::hypot(re, im); }
    [[nodiscard]] double angle() const { return std::atan2(im, re); }
    [[nodiscard]] Phasor conj() const { return {re, -im}; }

    [[nodiscard]] std::complex<double> to_complex() const { return {re, im}; }
    static Phasor from_complex(std::complex<double> z) { return {z.real(), z.imag()}; }
};

inline Phasor operator+(Phasor a, Phasor b) { return {a.re + b.re, a.im + b.im}; }
inline Phasor operator-(Phasor a, Phasor b) { return {a.re - b.re, a.im - b.im}; }
inline Phasor operator*(Phasor a, Phasor b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline Phasor operator*(double k, Phasor p) { return {k * p.re, k * p.im}; }

}  // namespace dsglab
