#pragma once

// Slice regularity on H: the operator
//
//   dbar_s G(x I + y s) = (1/2) (d/dx + R_s d/dy) G(x I + y s),
//
// with R_s right multiplication by s, evaluated by central differences; the
// splitting f = g + L h on the J-slice, circularization membership and a
// constructive route from a slice-regular function back to a stem function.

#include <cstdint>
#include <functional>
#include <vector>

#include "qcalc/stem.hpp"

namespace qcalc {

using QuaternionMap = std::function<Mat2(const Quaternion&)>;
/// Function of the slice coordinates (x, y) for a fixed imaginary unit.
using SliceMap = std::function<Mat2(double x, double y)>;

struct SlicePoint {
    double x = 0.0;
    double y = 0.0;
    Quaternion s = Quaternion::unit_J();
};

struct SliceSampleGrid {
    std::vector<SlicePoint> points;
    double h = 1e-4;

    /// Every s unit imaginary (s^2 = -I within 1e-12), h > 0, and each
    /// x + iy inside `domain`. Throws InvalidArgument otherwise.
    void validate(const SymmetricDomain& domain = {}) const;

    /// `count` points with x + iy drawn from a disk of the domain (or the
    /// square [-1.5, 1.5]^2 for the whole plane) keeping 2h clearance, and s
    /// uniform on the unit sphere of imaginary quaternions.
    static SliceSampleGrid random(const SymmetricDomain& domain, int count, std::uint64_t seed, double h = 1e-4);
};

/// True when s is a unit purely imaginary quaternion within tol.
bool is_imaginary_unit(const Quaternion& s, double tol = 1e-12);

/// Central-difference dbar_s of a function of (x, y).
Mat2 dbar_slice(const SliceMap& G, double x, double y, const Quaternion& s, double h);

/// Central-difference dbar_s of G at x I + y s. All four stencil points must
/// lie in the circularization of `domain` (DomainError otherwise).
Mat2 dbar_s(const QuaternionMap& G, double x, double y, const Quaternion& s, double h = 1e-4,
            const SymmetricDomain& domain = {});

struct SliceReport {
    double max_defect = 0.0;  ///< max Frobenius norm of dbar_s over the grid
    bool pass = false;
    SlicePoint worst_point;
};

SliceReport slice_regularity_report(const QuaternionMap& G, const SliceSampleGrid& grid, double tol,
                                    const SymmetricDomain& domain = {});

/// Pointwise split of a J-slice function f = f0 I + f1 J + f2 K + f3 L into
/// g = f0 I + f1 J and h = f3 I + f2 J, both C_J-valued, with f = g + L h.
struct SliceSplit {
    std::function<Quaternion(double, double)> g;
    std::function<Quaternion(double, double)> h;
};

SliceSplit split_slice(std::function<Quaternion(double, double)> f);

/// sigma(q) inside U.
bool circularization_contains(const SymmetricDomain& U, const Quaternion& q);
/// x + iy inside U for the axial form q = x I + y s.
bool axial_contains(const SymmetricDomain& U, const Quaternion& q);

struct SliceFit {
    StemFunction stem;
    /// Max deviation between the fitted slice values and f at off-grid points of the fitting circle.
    double residual = 0.0;
};

/// Recovers a stem function from a slice-regular f on the J-slice: split
/// f = g + L h, read g and h as holomorphic functions of x + iy, expand both
/// in powers of (zeta - center) up to `degree` from samples on the circle
/// |zeta - center| = radius, and return the stem F + L G with
/// F = diag(g(zeta), conj g(conj zeta)) and G alike. `center` must be real.
SliceFit fit_stem_from_slice(const std::function<Quaternion(double, double)>& f, double center, double radius,
                             unsigned degree = 16, const SymmetricDomain& domain = {});

}  // namespace qcalc
