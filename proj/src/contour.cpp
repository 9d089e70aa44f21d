#include "qcalc/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qcalc/errors.hpp"
#include "qcalc/spectrum.hpp"

namespace qcalc {

void QuadratureConfig::validate() const {
    auto pow2 = [](int n) { return n > 0 && (n & (n - 1)) == 0; };
    if (!pow2(nodes_per_circle) || nodes_per_circle < 16) {
        throw InvalidArgument("nodes_per_circle must be a power of two >= 16");
    }
    if (!pow2(max_nodes) || max_nodes < nodes_per_circle) {
        throw InvalidArgument("max_nodes must be a power of two >= nodes_per_circle");
    }
    if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) {
        throw InvalidArgument("rel_tol must be positive");
    }
}

bool Contour::check_conjugate_symmetry(double tol) const {
    for (const Circle& c : circles) {
        const double scale = tol * std::max(1.0, std::abs(c.center) + c.radius);
        if (std::abs(c.center.imag()) <= scale) {
            continue;
        }
        const bool mirrored = std::any_of(circles.begin(), circles.end(), [&](const Circle& m) {
            return std::abs(m.center - std::conj(c.center)) <= scale && std::abs(m.radius - c.radius) <= scale;
        });
        if (!mirrored) {
            return false;
        }
    }
    return true;
}

namespace {

bool closures_meet(const Circle& a, const Circle& b) {
    return std::abs(a.center - b.center) <= a.radius + b.radius;
}

// Smallest real-centered circle containing the given disks: minimize the
// convex function x -> max_j |x - c_j| + r_j by golden-section search.
Circle real_centered_cover(const std::vector<Circle>& disks) {
    double lo = disks.front().center.real();
    double hi = lo;
    for (const Circle& d : disks) {
        lo = std::min(lo, d.center.real());
        hi = std::max(hi, d.center.real());
    }
    auto reach = [&](double x) {
        double r = 0.0;
        for (const Circle& d : disks) {
            r = std::max(r, std::abs(Complex(x, 0.0) - d.center) + d.radius);
        }
        return r;
    };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
        const double x1 = b - g * (b - a);
        const double x2 = a + g * (b - a);
        if (reach(x1) <= reach(x2)) {
            b = x2;
        } else {
            a = x1;
        }
    }
    const double x = 0.5 * (a + b);
    // Slight inflation keeps every covered disk strictly inside.
    return Circle{Complex(x, 0.0), reach(x) * (1.0 + 1e-12), +1};
}

struct Group {
    std::vector<Circle> members;
    Circle hull;
};

void merge_groups(std::vector<Group>& groups) {
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < groups.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < groups.size() && !changed; ++j) {
                if (closures_meet(groups[i].hull, groups[j].hull)) {
                    groups[i].members.insert(groups[i].members.end(), groups[j].members.begin(),
                                             groups[j].members.end());
                    groups[i].hull = real_centered_cover(groups[i].members);
                    groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(j));
                    changed = true;
                }
            }
        }
    }
}

void sort_circles(Contour& gamma) {
    std::sort(gamma.circles.begin(), gamma.circles.end(), [](const Circle& a, const Circle& b) {
        if (a.center.real() != b.center.real()) {
            return a.center.real() < b.center.real();
        }
        return a.center.imag() < b.center.imag();
    });
}

}  // namespace

Contour build_contour(const std::vector<Complex>& spectra, const SymmetricDomain& domain, double margin) {
    if (!(margin > 0.0) || !std::isfinite(margin)) {
        throw InvalidArgument("contour margin must be positive");
    }
    if (spectra.empty()) {
        throw InvalidArgument("build_contour needs at least one spectral point");
    }
    std::vector<Complex> points;
    auto add_point = [&](Complex z) {
        for (const Complex& p : points) {
            if (std::abs(p - z) <= 1e-12 * std::max(1.0, std::abs(z))) {
                return;
            }
        }
        points.push_back(z);
    };
    for (const Complex& s : spectra) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
            throw InvalidArgument("non-finite spectral point");
        }
        if (!(domain.clearance(s) > margin)) {
            throw GeometryError("spectral point " + std::to_string(s.real()) + "+" + std::to_string(s.imag()) +
                                "i has clearance <= margin from the domain boundary");
        }
        add_point(s);
        add_point(std::conj(s));
    }

    // Groups of margin disks; a group with more than one member is covered by
    // a single real-centered circle.
    std::vector<Group> groups;
    for (const Complex& p : points) {
        const Circle c{p, margin, +1};
        groups.push_back(Group{{c}, c});
    }
    merge_groups(groups);

    Contour gamma;
    for (const Group& g : groups) {
        if (!domain.contains_closed_disk(g.hull.center, g.hull.radius)) {
            throw GeometryError("insufficient clearance: enclosing circle of radius " +
                                std::to_string(g.hull.radius) + " leaves the domain");
        }
        gamma.circles.push_back(g.hull);
    }
    sort_circles(gamma);
    gamma.conjugate_symmetric = gamma.check_conjugate_symmetry();
    return gamma;
}

Contour real_centered_contour(const std::vector<Complex>& spectra, double margin) {
    if (!(margin > 0.0) || !std::isfinite(margin)) {
        throw InvalidArgument("contour margin must be positive");
    }
    if (spectra.empty()) {
        throw InvalidArgument("real_centered_contour needs at least one spectral point");
    }
    std::vector<Group> groups;
    for (const Complex& s : spectra) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
            throw InvalidArgument("non-finite spectral point");
        }
        const Circle c{Complex(s.real(), 0.0), std::abs(s.imag()) + margin, +1};
        groups.push_back(Group{{c}, c});
    }
    merge_groups(groups);
    Contour gamma;
    for (const Group& g : groups) {
        gamma.circles.push_back(g.hull);
    }
    sort_circles(gamma);
    gamma.conjugate_symmetric = true;
    return gamma;
}

Contour contour_for(const Quaternion& q, const SymmetricDomain& domain, double margin) {
    const SpectrumPair sp = spectrum(q);
    return build_contour({sp.s_plus, sp.s_minus}, domain, margin);
}

namespace {

void require_enclosed(const SpectrumPair& sp, const Contour& gamma, const SymmetricDomain& domain) {
    if (gamma.circles.empty()) {
        throw GeometryError("empty contour");
    }
    for (const Circle& c : gamma.circles) {
        if (!(c.radius > 0.0) || c.orientation != +1) {
            throw GeometryError("contour circles must have positive radius and orientation +1");
        }
        if (!domain.contains_closed_disk(c.center, c.radius)) {
            throw GeometryError("contour leaves the domain of the function");
        }
    }
    for (std::size_t i = 0; i < gamma.circles.size(); ++i) {
        for (std::size_t j = i + 1; j < gamma.circles.size(); ++j) {
            if (closures_meet(gamma.circles[i], gamma.circles[j])) {
                throw GeometryError("contour circles must have disjoint closures");
            }
        }
    }
    for (const Complex& s : {sp.s_plus, sp.s_minus}) {
        const bool inside = std::any_of(gamma.circles.begin(), gamma.circles.end(), [&](const Circle& c) {
            return c.radius - std::abs(s - c.center) > 1e-12 * std::max(1.0, c.radius);
        });
        if (!inside) {
            throw GeometryError("spectrum lies on or outside the contour");
        }
    }
}

ContourResult integrate(const std::function<Mat2(Complex)>& F, const Quaternion& q, const Contour& gamma,
                        const QuadratureConfig& cfg, const SymmetricDomain& domain) {
    const SpectrumPair sp = spectrum(q);
    require_enclosed(sp, gamma, domain);
    const SpectralProjections E = spectral_projections(sp);
    auto integrand = [&](Complex zeta) -> Mat2 {
        if (sp.real) {
            return F(zeta) * (1.0 / (zeta - sp.s_plus));
        }
        const Mat2 resolvent = (1.0 / (zeta - sp.s_plus)) * E.plus + (1.0 / (zeta - sp.s_minus)) * E.minus;
        return F(zeta) * resolvent;
    };
    ContourResult out;
    out.value = integrate_circles(
        gamma.circles, integrand, Mat2::zero(), [](const Mat2& m) { return m.frobenius_norm(); }, cfg,
        out.diagnostics);
    return out;
}

}  // namespace

ContourResult cauchy_transform(const StemFunction& F, const Quaternion& q, const Contour& gamma,
                               const QuadratureConfig& cfg) {
    return integrate([&F](Complex z) { return F(z); }, q, gamma, cfg, F.domain());
}

ContourResult cauchy_transform(const MatrixFunction& F, const Quaternion& q, const Contour& gamma,
                               const QuadratureConfig& cfg, const SymmetricDomain& domain) {
    return integrate([&F](Complex z) { return F(z); }, q, gamma, cfg, domain);
}

ContourResult cauchy_derivative(const StemFunction& F, unsigned n, const Quaternion& q, const Contour& gamma,
                                const QuadratureConfig& cfg) {
    return cauchy_transform(F.derivative(n), q, gamma, cfg);
}

Mat2 series_eval(const std::function<Quaternion(unsigned)>& coeff, const Quaternion& q, double radius,
                 unsigned max_terms) {
    if (!(q.norm() < radius)) {
        throw DomainError("series argument outside the disk of convergence: ||q|| = " + std::to_string(q.norm()) +
                          " >= " + std::to_string(radius));
    }
    const Mat2 qm = q.matrix();
    Mat2 power = Mat2::identity();
    Mat2 sum;
    int small_run = 0;
    for (unsigned n = 0; n < max_terms; ++n) {
        const Mat2 term = coeff(n).matrix() * power;
        sum += term;
        if (term.frobenius_norm() < 1e-16 * sum.frobenius_norm()) {
            if (++small_run == 3) {
                break;
            }
        } else {
            small_run = 0;
        }
        power = power * qm;
    }
    return sum;
}

Mat2 series_eval(const std::vector<Quaternion>& coeffs, const Quaternion& q, double radius) {
    return series_eval([&coeffs](unsigned n) { return n < coeffs.size() ? coeffs[n] : Quaternion(); }, q, radius,
                       static_cast<unsigned>(coeffs.size()));
}

double derivative_bound(unsigned n, const CauchyGeometry& geom, double supF, bool half_plane_case) {
    double factorial = 1.0;
    for (unsigned k = 2; k <= n; ++k) {
        factorial *= k;
    }
    const double base = factorial * geom.r0 * supF / (std::pow(geom.d, n + 1.0) * geom.d0);
    return half_plane_case ? 2.0 * base : base;
}

Mat2 taylor_recompose(const StemFunction& F, const Quaternion& q, Complex lambda, unsigned terms,
                      std::optional<double> radius) {
    if (terms == 0) {
        throw InvalidArgument("taylor_recompose needs at least one term");
    }
    const Mat2 step = lambda * Mat2::identity() - q.matrix();
    if (radius && !(step.op_norm() < *radius)) {
        throw DomainError("||lambda I - q|| = " + std::to_string(step.op_norm()) +
                          " is not below the admissible radius " + std::to_string(*radius));
    }
    StemFunction G = F;
    Mat2 power = Mat2::identity();
    Mat2 sum;
    double factorial = 1.0;
    std::vector<double> norms;
    norms.reserve(terms);
    for (unsigned n = 0; n < terms; ++n) {
        if (n > 0) {
            factorial *= n;
            G = G.derivative();
            power = power * step;
        }
        const Mat2 term = eval_spectral(G, q) * power * (1.0 / factorial);
        sum += term;
        norms.push_back(term.frobenius_norm());
        if (!sum.is_finite()) {
            throw DomainError("Taylor series diverges (non-finite partial sum)");
        }
    }
    constexpr std::size_t kRun = 8;
    if (norms.size() >= kRun) {
        bool growing = true;
        for (std::size_t k = norms.size() - kRun + 1; k < norms.size(); ++k) {
            growing = growing && norms[k] > norms[k - 1];
        }
        if (growing && norms.back() > 1e-3 * std::max(sum.frobenius_norm(), 1e-300)) {
            throw DomainError("Taylor series terms are growing; lambda is outside the convergence disk");
        }
    }
    return sum;
}

}  // namespace qcalc
