#include "qcalc/slice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qcalc/errors.hpp"
#include "qcalc/spectrum.hpp"

namespace qcalc {

bool is_imaginary_unit(const Quaternion& s, double tol) {
    const Mat2 sq = (s * s).matrix() + Mat2::identity();
    return sq.max_abs() <= tol && std::abs(s.re()) <= tol;
}

void SliceSampleGrid::validate(const SymmetricDomain& domain) const {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidArgument("finite-difference step must be positive");
    }
    for (const SlicePoint& p : points) {
        if (!is_imaginary_unit(p.s)) {
            throw InvalidArgument("grid direction is not a unit imaginary quaternion");
        }
        if (!domain.contains(Complex(p.x, p.y))) {
            throw InvalidArgument("grid point outside the declared domain");
        }
    }
}

SliceSampleGrid SliceSampleGrid::random(const SymmetricDomain& domain, int count, std::uint64_t seed, double h) {
    if (count <= 0) {
        throw InvalidArgument("grid size must be positive");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Complex center = 0.0;
    double radius = 1.5;
    bool square = domain.is_whole_plane();
    if (!square) {
        const auto& disks = domain.disks();
        const auto it = std::max_element(disks.begin(), disks.end(),
                                         [](const Disk& a, const Disk& b) { return a.radius < b.radius; });
        center = it->center;
        radius = it->radius - 2.0 * h;
        if (!(radius > 0.0)) {
            throw InvalidArgument("domain too small for the finite-difference step");
        }
    }
    SliceSampleGrid grid;
    grid.h = h;
    while (static_cast<int>(grid.points.size()) < count) {
        Complex z;
        if (square) {
            z = Complex(-1.5 + 3.0 * unit(rng), -1.5 + 3.0 * unit(rng));
        } else {
            z = center + radius * std::sqrt(unit(rng)) * std::polar(1.0, 2.0 * std::numbers::pi * unit(rng));
        }
        double v1 = normal(rng);
        double v2 = normal(rng);
        double v3 = normal(rng);
        const double n = std::sqrt(v1 * v1 + v2 * v2 + v3 * v3);
        if (n < 1e-8) {
            continue;
        }
        grid.points.push_back(SlicePoint{z.real(), z.imag(), Quaternion::from_components(0, v1 / n, v2 / n, v3 / n)});
    }
    return grid;
}

Mat2 dbar_slice(const SliceMap& G, double x, double y, const Quaternion& s, double h) {
    if (!(h > 0.0)) {
        throw InvalidArgument("finite-difference step must be positive");
    }
    const Mat2 dx = (G(x + h, y) - G(x - h, y)) * Complex(1.0 / (2.0 * h));
    const Mat2 dy = (G(x, y + h) - G(x, y - h)) * Complex(1.0 / (2.0 * h));
    return (dx + dy * s.matrix()) * Complex(0.5);
}

Mat2 dbar_s(const QuaternionMap& G, double x, double y, const Quaternion& s, double h,
            const SymmetricDomain& domain) {
    if (!is_imaginary_unit(s)) {
        throw InvalidArgument("dbar_s direction must be a unit imaginary quaternion");
    }
    const Quaternion I = Quaternion::unit_I();
    auto at = [&](double u, double v) { return u * I + v * s; };
    if (!domain.is_whole_plane()) {
        for (const Quaternion& q : {at(x + h, y), at(x - h, y), at(x, y + h), at(x, y - h)}) {
            if (!circularization_contains(domain, q)) {
                throw DomainError("finite-difference stencil leaves the domain");
            }
        }
    }
    return dbar_slice([&](double u, double v) { return G(at(u, v)); }, x, y, s, h);
}

SliceReport slice_regularity_report(const QuaternionMap& G, const SliceSampleGrid& grid, double tol,
                                    const SymmetricDomain& domain) {
    grid.validate(domain);
    SliceReport report;
    report.max_defect = -1.0;
    for (const SlicePoint& p : grid.points) {
        const double d = dbar_s(G, p.x, p.y, p.s, grid.h, domain).frobenius_norm();
        if (d > report.max_defect || std::isnan(d)) {
            report.max_defect = d;
            report.worst_point = p;
        }
    }
    report.pass = report.max_defect <= tol;
    return report;
}

SliceSplit split_slice(std::function<Quaternion(double, double)> f) {
    SliceSplit out;
    out.g = [f](double x, double y) {
        const auto c = f(x, y).components();
        return Quaternion::from_components(c[0], c[1], 0.0, 0.0);
    };
    out.h = [f](double x, double y) {
        const auto c = f(x, y).components();
        return Quaternion::from_components(c[3], c[2], 0.0, 0.0);
    };
    return out;
}

bool circularization_contains(const SymmetricDomain& U, const Quaternion& q) {
    const SpectrumPair sp = spectrum(q);
    return U.contains(sp.s_plus) && U.contains(sp.s_minus);
}

bool axial_contains(const SymmetricDomain& U, const Quaternion& q) {
    const AxialForm a = axial_decompose(q);
    return U.contains(Complex(a.x, a.y));
}

namespace {

// Taylor coefficients of a holomorphic function around `center` from
// equispaced samples on a circle (discrete Cauchy formula).
std::vector<Complex> circle_coefficients(const std::vector<Complex>& values, double radius, unsigned degree) {
    const std::size_t n = values.size();
    std::vector<Complex> coeffs(degree + 1);
    for (unsigned k = 0; k <= degree; ++k) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += values[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * j % n) / n);
        }
        coeffs[k] = acc / (static_cast<double>(n) * std::pow(radius, k));
    }
    return coeffs;
}

}  // namespace

SliceFit fit_stem_from_slice(const std::function<Quaternion(double, double)>& f, double center, double radius,
                             unsigned degree, const SymmetricDomain& domain) {
    if (!(radius > 0.0) || !std::isfinite(center)) {
        throw InvalidArgument("fit circle needs a real center and positive radius");
    }
    if (!domain.contains_closed_disk(Complex(center, 0.0), radius)) {
        throw DomainError("fit circle leaves the domain");
    }
    std::size_t nodes = 16;
    while (nodes < 4 * (degree + 1)) {
        nodes *= 2;
    }
    const SliceSplit split = split_slice(f);
    std::vector<Complex> gv(nodes);
    std::vector<Complex> hv(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
        const Complex z = center + radius * std::polar(1.0, 2.0 * std::numbers::pi * j / nodes);
        gv[j] = split.g(z.real(), z.imag()).z1();
        hv[j] = split.h(z.real(), z.imag()).z1();
    }
    const std::vector<Complex> a = circle_coefficients(gv, radius, degree);
    const std::vector<Complex> b = circle_coefficients(hv, radius, degree);

    // Coefficient k of the stem is Q((a_k, 0)) + L Q((b_k, 0)).
    std::array<std::vector<Complex>, 4> entries;
    const Quaternion L = Quaternion::unit_L();
    for (unsigned k = 0; k <= degree; ++k) {
        const Mat2 m = (Quaternion(a[k], 0.0) + L * Quaternion(b[k], 0.0)).matrix();
        entries[0].push_back(m.a11);
        entries[1].push_back(m.a12);
        entries[2].push_back(m.a21);
        entries[3].push_back(m.a22);
    }
    auto shifted = [&](const std::vector<Complex>& c) {
        return AnalyticScalar::affine(1.0, -center, AnalyticScalar::polynomial(c));
    };
    const MatrixFunction M(shifted(entries[0]), shifted(entries[1]), shifted(entries[2]), shifted(entries[3]));
    double scale = 1.0;
    for (const Complex& v : gv) {
        scale = std::max(scale, std::abs(v));
    }
    for (const Complex& v : hv) {
        scale = std::max(scale, std::abs(v));
    }
    SliceFit fit{StemFunction::general(M, domain.is_whole_plane() ? SymmetricDomain::disk(center, 1.05 * radius) : domain,
                                       1e-10 * scale),
                 0.0};

    const Quaternion I = Quaternion::unit_I();
    const Quaternion J = Quaternion::unit_J();
    for (std::size_t j = 0; j < nodes; ++j) {
        for (double rho : {radius, 0.5 * radius}) {
            const Complex z = center + rho * std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / nodes);
            const Quaternion q = z.real() * I + z.imag() * J;
            const Quaternion diff = eval_quaternion(fit.stem, q) - f(z.real(), z.imag());
            fit.residual = std::max(fit.residual, diff.norm());
        }
    }
    return fit;
}

}  // namespace qcalc
