#pragma once

#include "qcalc/quaternion.hpp"

namespace qcalc {

/// Eigen-structure of the normal matrix Q(z).
///
/// Convention: Im s_plus >= 0 always, s_minus = conj(s_plus). The canonical
/// eigenvectors are
///   nu_pm = (z2, s_pm - z1) / sqrt(|z2|^2 + |s_pm - z1|^2)      if z2 != 0,
///   nu_plus = (1, 0), nu_minus = (0, 1)                          if z2 == 0,
/// with the pair swapped in the second branch when Im z1 < 0 so the sign
/// convention holds. They are fixed only up to phase; these are the
/// representatives returned.
struct SpectrumPair {
    Complex s_plus;
    Complex s_minus;
    CVec2 nu_plus;
    CVec2 nu_minus;
    bool real = false;  ///< q in R I: s_plus == s_minus
};

/// |z2| (and |Im z1|, for the real test) at or below this are treated as zero.
double degenerate_threshold(const Quaternion& q);

SpectrumPair spectrum(const Quaternion& q);

struct SpectralProjections {
    Mat2 plus;   ///< E_+ w = <w, nu_+> nu_+
    Mat2 minus;  ///< E_- w = <w, nu_-> nu_-
};

SpectralProjections spectral_projections(const Quaternion& q);
SpectralProjections spectral_projections(const SpectrumPair& sp);

/// Q((Re zeta + i sqrt((Im zeta)^2 - |u|^2), u)), whose spectrum is {zeta, conj zeta}.
/// Requires |u| <= |Im zeta|; throws DomainError otherwise.
Quaternion quaternions_with_spectrum(Complex zeta, Complex u);

/// q = x I + y s with y >= 0 and s a unit purely imaginary quaternion (s^2 = -I).
struct AxialForm {
    double x = 0.0;
    double y = 0.0;
    Quaternion s = Quaternion::unit_J();
};

/// For real q returns y = 0 and s = J.
AxialForm axial_decompose(const Quaternion& q);

}  // namespace qcalc
