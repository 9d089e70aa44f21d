#include "qcalc/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "qcalc/errors.hpp"

namespace qcalc {

double degenerate_threshold(const Quaternion& q) { return 1e-14 * std::max(1.0, q.norm()); }

SpectrumPair spectrum(const Quaternion& q) {
    const Complex z1 = q.z1();
    const Complex z2 = q.z2();
    const double a = z1.real();
    const double b = z1.imag();
    const double abs_z2 = std::abs(z2);
    const double thr = degenerate_threshold(q);

    SpectrumPair sp;
    if (abs_z2 <= thr) {
        if (std::abs(b) <= thr) {
            sp.s_plus = sp.s_minus = Complex(a, 0.0);
            sp.nu_plus = {1.0, 0.0};
            sp.nu_minus = {0.0, 1.0};
            sp.real = true;
        } else if (b > 0.0) {
            sp.s_plus = z1;
            sp.s_minus = std::conj(z1);
            sp.nu_plus = {1.0, 0.0};
            sp.nu_minus = {0.0, 1.0};
        } else {
            sp.s_plus = std::conj(z1);
            sp.s_minus = z1;
            sp.nu_plus = {0.0, 1.0};
            sp.nu_minus = {1.0, 0.0};
        }
        return sp;
    }

    const double r = std::hypot(b, abs_z2);
    // s_+ - z1 = i (r - b), s_- - z1 = -i (r + b); one of the two differences
    // cancels, recover it from (r - b)(r + b) = |z2|^2.
    double r_minus_b = 0.0;
    double r_plus_b = 0.0;
    if (b >= 0.0) {
        r_plus_b = r + b;
        r_minus_b = abs_z2 * abs_z2 / r_plus_b;
    } else {
        r_minus_b = r - b;
        r_plus_b = abs_z2 * abs_z2 / r_minus_b;
    }
    sp.s_plus = Complex(a, r);
    sp.s_minus = Complex(a, -r);
    const double n_plus = std::hypot(abs_z2, r_minus_b);
    const double n_minus = std::hypot(abs_z2, r_plus_b);
    sp.nu_plus = {z2 / n_plus, Complex(0.0, r_minus_b / n_plus)};
    sp.nu_minus = {z2 / n_minus, Complex(0.0, -r_plus_b / n_minus)};
    return sp;
}

SpectralProjections spectral_projections(const SpectrumPair& sp) {
    return {outer(sp.nu_plus, sp.nu_plus), outer(sp.nu_minus, sp.nu_minus)};
}

SpectralProjections spectral_projections(const Quaternion& q) { return spectral_projections(spectrum(q)); }

Quaternion quaternions_with_spectrum(Complex zeta, Complex u) {
    const double b = std::abs(zeta.imag());
    const double au = std::abs(u);
    if (au > b) {
        throw DomainError("|u| exceeds |Im zeta|: no quaternion has the requested spectrum");
    }
    const double w = std::sqrt(std::max(0.0, (b - au) * (b + au)));
    return Quaternion(Complex(zeta.real(), w), u);
}

AxialForm axial_decompose(const Quaternion& q) {
    const SpectrumPair sp = spectrum(q);
    AxialForm form;
    form.x = q.re();
    if (sp.real) {
        return form;
    }
    form.y = sp.s_plus.imag();
    form.s = Quaternion(Complex(0.0, q.z1().imag() / form.y), q.z2() / form.y);
    return form;
}

}  // namespace qcalc
