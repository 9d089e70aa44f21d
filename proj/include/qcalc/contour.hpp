#pragma once

// Contour evaluation of the functional calculus
//
//   F_H(q) = (1/2 pi i) \oint_Gamma F(zeta) (zeta I - q)^{-1} d zeta
//
// together with extended derivatives, power series and local Taylor
// recomposition around a quaternion.

#include <functional>
#include <optional>
#include <vector>

#include "qcalc/quadrature.hpp"
#include "qcalc/stem.hpp"

namespace qcalc {

/// Union of positively oriented circles with pairwise disjoint closures.
struct Contour {
    std::vector<Circle> circles;
    bool conjugate_symmetric = false;

    /// Each circle is real-centered or has its mirror in the set.
    bool check_conjugate_symmetry(double tol = 1e-12) const;
};

/// Circles of radius `margin` around each spectral point and its mirror;
/// overlapping groups are replaced by a real-centered circle that covers the
/// margin disks of every member. Throws GeometryError when a point is within
/// `margin` of the domain boundary or a circle does not fit in the domain.
Contour build_contour(const std::vector<Complex>& spectra, const SymmetricDomain& domain, double margin);

/// Real-centered circles only: each point lambda gets the circle with center
/// Re lambda and radius |Im lambda| + margin, and overlapping circles are
/// merged. Used for operator spectra, where clusters are common.
Contour real_centered_contour(const std::vector<Complex>& spectra, double margin);

/// build_contour on sigma(q).
Contour contour_for(const Quaternion& q, const SymmetricDomain& domain, double margin);

struct ContourResult {
    Mat2 value;
    QuadratureDiagnostics diagnostics;
    /// Set when max_nodes was reached before the doubling test passed.
    bool accuracy_warning() const { return !diagnostics.converged; }
};

/// Integral of F(zeta) (zeta I - q)^{-1}; the resolvent uses the closed form
/// (zeta - s_+)^{-1} E_+ + (zeta - s_-)^{-1} E_-.
/// Throws GeometryError if sigma(q) is not strictly inside gamma or gamma
/// leaves the domain of F.
ContourResult cauchy_transform(const StemFunction& F, const Quaternion& q, const Contour& gamma,
                               const QuadratureConfig& cfg = {});
ContourResult cauchy_transform(const MatrixFunction& F, const Quaternion& q, const Contour& gamma,
                               const QuadratureConfig& cfg = {}, const SymmetricDomain& domain = {});

/// F^{(n)}_H(q) via the contour integral of the analytic derivative F^{(n)}.
ContourResult cauchy_derivative(const StemFunction& F, unsigned n, const Quaternion& q, const Contour& gamma,
                                const QuadratureConfig& cfg = {});

/// sum a_n q^n, stopping after three consecutive terms with
/// ||term|| < 1e-16 ||partial sum||. Requires ||q|| < radius (DomainError).
Mat2 series_eval(const std::vector<Quaternion>& coeffs, const Quaternion& q, double radius);
/// Same for an infinite coefficient sequence; stops after max_terms otherwise.
Mat2 series_eval(const std::function<Quaternion(unsigned)>& coeff, const Quaternion& q, double radius,
                 unsigned max_terms = 10000);

/// Nested disks D in Delta0 in Delta with boundaries C, Gamma0, Gamma; the
/// spectrum lies in D and supF is taken over Gamma.
struct CauchyGeometry {
    double r0 = 0.0;  ///< radius of Gamma0
    double d = 0.0;   ///< dist(Gamma, Gamma0)
    double d0 = 0.0;  ///< dist(Gamma0, C)
};

/// 2 n! r0 supF / (d^{n+1} d0) when the circles sit in both half-planes,
/// n! r0 supF / (d^{n+1} d0) for real-centered disks.
double derivative_bound(unsigned n, const CauchyGeometry& geom, double supF, bool half_plane_case);

/// sum_{n < terms} F^{(n)}_H(q)/n! (lambda I - q)^n.
/// With `radius` set, ||lambda I - q|| >= radius is a DomainError. Growing
/// terms (last eight strictly increasing and the last one not negligible)
/// also raise DomainError.
Mat2 taylor_recompose(const StemFunction& F, const Quaternion& q, Complex lambda, unsigned terms,
                      std::optional<double> radius = std::nullopt);

}  // namespace qcalc
