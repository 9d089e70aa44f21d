#include "qcalc/joint_op.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qcalc/errors.hpp"

namespace qcalc {

namespace {

double op_norm(const RealMatrix& m) {
    Eigen::JacobiSVD<RealMatrix> svd(m);
    return svd.singularValues()(0);
}

template <class M>
double sigma_min(const M& a) {
    Eigen::JacobiSVD<M> svd(a);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace

CommutingPair::CommutingPair(RealOperator T1, RealOperator T2) : t1_(std::move(T1)), t2_(std::move(T2)) {
    if (t1_.n() != t2_.n()) {
        throw InvalidArgument("commuting pair needs operators of equal size");
    }
    const RealMatrix& a = t1_.matrix();
    const RealMatrix& b = t2_.matrix();
    const double commutator = (a * b - b * a).norm();
    const double scale = std::max(1.0, a.norm() * b.norm());
    if (commutator > 1e-12 * scale) {
        throw InvalidArgument("operators do not commute (||[T1, T2]|| = " + std::to_string(commutator) + ")");
    }
}

ComplexOperator pair_q_matrix(const CommutingPair& P) {
    const int n = P.n();
    ComplexMatrix m(2 * n, 2 * n);
    const ComplexMatrix t1 = P.T1().matrix().cast<Complex>();
    const ComplexMatrix t2 = P.T2().matrix().cast<Complex>();
    m.topLeftCorner(n, n) = t1;
    m.topRightCorner(n, n) = t2;
    m.bottomLeftCorner(n, n) = -t2;
    m.bottomRightCorner(n, n) = t1;
    return ComplexOperator(std::move(m));
}

RealMatrix joint_pencil(const CommutingPair& P, const CVec2& z) {
    const RealMatrix& t1 = P.T1().matrix();
    const RealMatrix& t2 = P.T2().matrix();
    const int n = P.n();
    return t1 * t1 + t2 * t2 - 2.0 * z.z1.real() * t1 - 2.0 * z.z2.real() * t2 +
           (std::norm(z.z1) + std::norm(z.z2)) * RealMatrix::Identity(n, n);
}

double joint_resolvent_margin(const CommutingPair& P, const CVec2& z) {
    const double a = op_norm(P.T1().matrix());
    const double b = op_norm(P.T2().matrix());
    return sigma_min(joint_pencil(P, z)) / std::max(1.0, a * a + b * b);
}

PairBlockFactors pair_block_factors(const CommutingPair& P, const CVec2& z) {
    const int n = P.n();
    const ComplexMatrix t1 = P.T1().matrix().cast<Complex>();
    const ComplexMatrix t2 = P.T2().matrix().cast<Complex>();
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    const Complex z1 = z.z1;
    const Complex z2 = z.z2;
    PairBlockFactors f;
    f.A.resize(2 * n, 2 * n);
    f.A.topLeftCorner(n, n) = t1 - z1 * I;
    f.A.topRightCorner(n, n) = t2 - z2 * I;
    f.A.bottomLeftCorner(n, n) = -(t2 - std::conj(z2) * I);
    f.A.bottomRightCorner(n, n) = t1 - std::conj(z1) * I;
    f.B.resize(2 * n, 2 * n);
    f.B.topLeftCorner(n, n) = t1 - std::conj(z1) * I;
    f.B.topRightCorner(n, n) = -(t2 - z2 * I);
    f.B.bottomLeftCorner(n, n) = t2 - std::conj(z2) * I;
    f.B.bottomRightCorner(n, n) = t1 - z1 * I;
    return f;
}

PairBlockMargins pair_block_margins(const CommutingPair& P, const CVec2& z) {
    const PairBlockFactors f = pair_block_factors(P, z);
    const CVec2 zs{std::conj(z.z1), -z.z2};
    const PairBlockFactors fs = pair_block_factors(P, zs);
    const double scale =
        std::max(1.0, op_norm(P.T1().matrix()) + op_norm(P.T2().matrix()) + norm(z));
    return {sigma_min(f.A) / scale, sigma_min(f.B) / scale, sigma_min(fs.A) / scale};
}

std::vector<CVec2> joint_spectrum_points(const CommutingPair& P, std::uint64_t seed, int cap) {
    const int n = P.n();
    if (n > cap) {
        throw InvalidArgument("pair dimension " + std::to_string(n) + " exceeds the dense cap " +
                              std::to_string(cap));
    }
    const ComplexMatrix t1 = P.T1().matrix().cast<Complex>();
    const ComplexMatrix t2 = P.T2().matrix().cast<Complex>();
    const double scale = std::max(1.0, std::max(t1.norm(), t2.norm()));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    constexpr int kAttempts = 8;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        const Complex mu(unit(rng), unit(rng));
        Eigen::ComplexEigenSolver<ComplexMatrix> es(t1 + mu * t2, true);
        if (es.info() != Eigen::Success) {
            continue;
        }
        std::vector<CVec2> points;
        bool ok = true;
        for (int k = 0; k < n && ok; ++k) {
            const Eigen::VectorXcd v = es.eigenvectors().col(k).normalized();
            const Complex l1 = v.dot(t1 * v);  // v^H T1 v
            const Complex l2 = v.dot(t2 * v);
            const double r1 = (t1 * v - l1 * v).norm();
            const double r2 = (t2 * v - l2 * v).norm();
            if (!(r1 <= 1e-8 * scale && r2 <= 1e-8 * scale)) {
                ok = false;
                break;
            }
            points.push_back(CVec2{l1, l2});
        }
        if (!ok) {
            continue;
        }
        auto key = [](const CVec2& p) {
            return std::array<double, 4>{p.z1.real(), p.z1.imag(), p.z2.real(), p.z2.imag()};
        };
        std::sort(points.begin(), points.end(), [&](const CVec2& a, const CVec2& b) { return key(a) < key(b); });
        std::vector<CVec2> unique;
        for (const CVec2& p : points) {
            const bool seen = std::any_of(unique.begin(), unique.end(), [&](const CVec2& u) {
                return std::abs(u.z1 - p.z1) + std::abs(u.z2 - p.z2) <= 1e-8 * scale;
            });
            if (!seen) {
                unique.push_back(p);
            }
        }
        return unique;
    }
    throw NumericError("no separating combination T1 + mu T2 found after 8 attempts");
}

// ---------------------------------------------------------------- Analytic2

Analytic2 Analytic2::constant(Complex c) { return monomial(0, 0, c); }

Analytic2 Analytic2::monomial(unsigned a, unsigned b, Complex c) {
    Analytic2 f;
    f.poly_.push_back(Monomial{c, a, b});
    return f;
}

Analytic2 Analytic2::separable(const AnalyticScalar& f, const AnalyticScalar& g, Complex c) {
    Analytic2 out;
    out.products_.push_back(Separable{c, f, g});
    return out;
}

namespace {

Complex ipow(Complex z, unsigned k) {
    Complex r = 1.0;
    for (; k > 0; k >>= 1) {
        if (k & 1U) {
            r *= z;
        }
        z *= z;
    }
    return r;
}

}  // namespace

Complex Analytic2::operator()(Complex z1, Complex z2) const {
    Complex sum = 0.0;
    for (const Monomial& m : poly_) {
        sum += m.c * ipow(z1, m.a) * ipow(z2, m.b);
    }
    for (const Separable& s : products_) {
        sum += s.c * s.f(z1) * s.g(z2);
    }
    return sum;
}

bool Analytic2::is_symmetric() const {
    return std::all_of(poly_.begin(), poly_.end(), [](const Monomial& m) { return m.c.imag() == 0.0; }) &&
           std::all_of(products_.begin(), products_.end(), [](const Separable& s) {
               return s.c.imag() == 0.0 && s.f.is_symmetric() && s.g.is_symmetric();
           });
}

Analytic2 operator+(Analytic2 f, const Analytic2& g) {
    f.poly_.insert(f.poly_.end(), g.poly_.begin(), g.poly_.end());
    f.products_.insert(f.products_.end(), g.products_.begin(), g.products_.end());
    return f;
}

// ---------------------------------------------------------------- sphere

namespace {

// max_k ||Re lambda_k - c|| + ||Im lambda_k|| over the joint eigenvalues, or
// a norm bound when they are unavailable.
double spectral_extent(const CommutingPair& P, double c1, double c2) {
    try {
        double extent = 0.0;
        for (const CVec2& p : joint_spectrum_points(P)) {
            const double re = std::hypot(p.z1.real() - c1, p.z2.real() - c2);
            const double im = std::hypot(p.z1.imag(), p.z2.imag());
            extent = std::max(extent, re + im);
        }
        return extent;
    } catch (const NumericError&) {
        const double a = op_norm(P.T1().matrix());
        const double b = op_norm(P.T2().matrix());
        return std::hypot(c1, c2) + 2.0 * std::hypot(a, b);
    }
}

}  // namespace

SphereGrid SphereGrid::enclosing(const CommutingPair& P, int resolution) {
    SphereGrid g;
    g.resolution = resolution;
    try {
        const std::vector<CVec2> pts = joint_spectrum_points(P);
        for (const CVec2& p : pts) {
            g.c1 += p.z1.real();
            g.c2 += p.z2.real();
        }
        g.c1 /= static_cast<double>(pts.size());
        g.c2 /= static_cast<double>(pts.size());
    } catch (const NumericError&) {
        g.c1 = g.c2 = 0.0;
    }
    g.radius = spectral_extent(P, g.c1, g.c2) + 1.0;
    return g;
}

namespace {

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double step = p1 / dp;
            t -= step;
            if (std::abs(step) < 1e-16) {
                break;
            }
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

Complex det3(const std::array<std::array<Complex, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

struct SpherePoint {
    Complex z1, z2;
    // derivatives with respect to (eta, theta1, theta2)
    std::array<Complex, 3> d1, d2;
};

SpherePoint sphere_point(const SphereGrid& g, double eta, double th1, double th2) {
    const double R = g.radius;
    const Complex e1 = std::polar(1.0, th1);
    const Complex e2 = std::polar(1.0, th2);
    SpherePoint p;
    p.z1 = g.c1 + R * std::cos(eta) * e1;
    p.z2 = g.c2 + R * std::sin(eta) * e2;
    p.d1 = {-R * std::sin(eta) * e1, kI * R * std::cos(eta) * e1, 0.0};
    p.d2 = {R * std::cos(eta) * e2, 0.0, kI * R * std::sin(eta) * e2};
    return p;
}

// Sign of det[outward normal, d/d eta, d/d theta1, d/d theta2] in R^4 with
// coordinates (Re z1, Im z1, Re z2, Im z2), times -1: with the form ordered as
// dzbar_k ^ dz1 ^ dz2 the kernel integrates to (-1)^{n(n-1)/2} = -1 against
// the boundary orientation, so the sphere is traversed the other way.
double orientation_sign(const SphereGrid& g) {
    const SpherePoint p = sphere_point(g, 0.6, 0.4, 1.1);
    Eigen::Matrix4d m;
    const Complex n1 = (p.z1 - g.c1) / g.radius;
    const Complex n2 = (p.z2 - g.c2) / g.radius;
    m.col(0) << n1.real(), n1.imag(), n2.real(), n2.imag();
    for (int k = 0; k < 3; ++k) {
        m.col(k + 1) << p.d1[k].real(), p.d1[k].imag(), p.d2[k].real(), p.d2[k].imag();
    }
    return m.determinant() > 0.0 ? -1.0 : 1.0;
}

}  // namespace

MartinelliResult martinelli_complex(const Analytic2& f, const CommutingPair& P, const SphereGrid& grid) {
    if (grid.resolution < 4 || !(grid.radius > 0.0) || !std::isfinite(grid.c1) || !std::isfinite(grid.c2)) {
        throw InvalidArgument("sphere grid needs resolution >= 4 and a positive radius");
    }
    const double extent = spectral_extent(P, grid.c1, grid.c2);
    if (!(grid.radius >= extent + 0.5)) {
        throw GeometryError("sphere of radius " + std::to_string(grid.radius) +
                            " does not enclose the joint spectrum (extent " + std::to_string(extent) + ")");
    }
    const int n = P.n();
    const int res = grid.resolution;
    const ComplexMatrix t1 = P.T1().matrix().cast<Complex>();
    const ComplexMatrix t2 = P.T2().matrix().cast<Complex>();
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    const RealMatrix t1sq_plus_t2sq = P.T1().matrix() * P.T1().matrix() + P.T2().matrix() * P.T2().matrix();

    std::vector<double> gx;
    std::vector<double> gw;
    gauss_legendre(res, gx, gw);
    const double half = std::numbers::pi / 4.0;  // eta in [0, pi/2]
    const double dtheta = 2.0 * std::numbers::pi / res;
    const double sign = orientation_sign(grid);

    detail::Compensated<ComplexMatrix> acc(ComplexMatrix::Zero(n, n));
    for (int a = 0; a < res; ++a) {
        const double eta = half * (gx[a] + 1.0);
        const double w_eta = half * gw[a];
        for (int b = 0; b < res; ++b) {
            const double th1 = dtheta * b;
            for (int c = 0; c < res; ++c) {
                const double th2 = dtheta * c;
                const SpherePoint p = sphere_point(grid, eta, th1, th2);
                std::array<Complex, 3> dc1;
                std::array<Complex, 3> dc2;
                for (int k = 0; k < 3; ++k) {
                    dc1[k] = std::conj(p.d1[k]);
                    dc2[k] = std::conj(p.d2[k]);
                }
                // dz2bar ^ dz1 ^ dz2 and dz1bar ^ dz1 ^ dz2 pulled back
                const Complex j2 = det3({dc2, p.d1, p.d2});
                const Complex j1 = det3({dc1, p.d1, p.d2});
                const ComplexMatrix L = t1sq_plus_t2sq.cast<Complex>() - 2.0 * p.z1.real() * t1 -
                                        2.0 * p.z2.real() * t2 + (std::norm(p.z1) + std::norm(p.z2)) * I;
                Eigen::PartialPivLU<ComplexMatrix> lu(L);
                const ComplexMatrix M = (std::conj(p.z1) * I - t1) * j2 - (std::conj(p.z2) * I - t2) * j1;
                const ComplexMatrix X = lu.solve(lu.solve(M));
                if (!X.allFinite()) {
                    throw GeometryError("L(z) is singular on the integration sphere");
                }
                acc.add(X * (f(p.z1, p.z2) * (w_eta * dtheta * dtheta * sign)));
            }
        }
    }
    const Complex two_pi_i = 2.0 * std::numbers::pi * kI;
    MartinelliResult out;
    out.value = acc.sum / (two_pi_i * two_pi_i);
    out.imag_residue = out.value.imag().norm();
    out.scale = std::max(1.0, out.value.norm());
    out.nodes = static_cast<long long>(res) * res * res;
    return out;
}

RealOperator martinelli_calculus(const Analytic2& f, const CommutingPair& P, const SphereGrid& grid,
                                 double imag_tol) {
    const MartinelliResult r = martinelli_complex(f, P, grid);
    if (!(r.imag_residue <= imag_tol * r.scale)) {
        throw AccuracyError("Martinelli integral has an imaginary residue of " + std::to_string(r.imag_residue),
                            r.imag_residue);
    }
    return RealOperator(r.value.real());
}

}  // namespace qcalc
