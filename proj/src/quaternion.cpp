#include "qcalc/quaternion.hpp"

#include <algorithm>
#include <cmath>

#include "qcalc/errors.hpp"

namespace qcalc {

namespace {

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

Complex inner(const CVec2& w, const CVec2& v) { return w.z1 * std::conj(v.z1) + w.z2 * std::conj(v.z2); }

double norm(const CVec2& v) { return std::hypot(std::abs(v.z1), std::abs(v.z2)); }

// ---------------------------------------------------------------- Mat2

Mat2& Mat2::operator+=(const Mat2& b) {
    a11 += b.a11;
    a12 += b.a12;
    a21 += b.a21;
    a22 += b.a22;
    return *this;
}

Mat2& Mat2::operator-=(const Mat2& b) {
    a11 -= b.a11;
    a12 -= b.a12;
    a21 -= b.a21;
    a22 -= b.a22;
    return *this;
}

Mat2& Mat2::operator*=(Complex s) {
    a11 *= s;
    a12 *= s;
    a21 *= s;
    a22 *= s;
    return *this;
}

Mat2 Mat2::adjoint() const { return {std::conj(a11), std::conj(a21), std::conj(a12), std::conj(a22)}; }

Complex Mat2::det() const { return a11 * a22 - a12 * a21; }

Mat2 Mat2::inverse() const {
    const Complex d = det();
    if (d == Complex{}) {
        throw SingularElement("singular 2x2 matrix");
    }
    return Mat2{a22, -a12, -a21, a11} * (1.0 / d);
}

CVec2 Mat2::apply(const CVec2& w) const { return {a11 * w.z1 + a12 * w.z2, a21 * w.z1 + a22 * w.z2}; }

double Mat2::frobenius_norm() const {
    return std::sqrt(std::norm(a11) + std::norm(a12) + std::norm(a21) + std::norm(a22));
}

double Mat2::op_norm() const {
    // sigma_max^2 is the top eigenvalue of a a^H = [[r1, c], [conj c, r2]].
    const double r1 = std::norm(a11) + std::norm(a12);
    const double r2 = std::norm(a21) + std::norm(a22);
    const Complex c = a11 * std::conj(a21) + a12 * std::conj(a22);
    return std::sqrt(0.5 * (r1 + r2 + std::hypot(r1 - r2, 2.0 * std::abs(c))));
}

double Mat2::max_abs() const { return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)}); }

bool Mat2::is_finite() const { return finite(a11) && finite(a12) && finite(a21) && finite(a22); }

Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
Mat2 operator-(const Mat2& a) { return {-a.a11, -a.a12, -a.a21, -a.a22}; }

Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22, a.a21 * b.a11 + a.a22 * b.a21,
            a.a21 * b.a12 + a.a22 * b.a22};
}

Mat2 operator*(Complex s, Mat2 a) { return a *= s; }
Mat2 operator*(Mat2 a, Complex s) { return a *= s; }

Mat2 outer(const CVec2& v, const CVec2& w) {
    return {v.z1 * std::conj(w.z1), v.z1 * std::conj(w.z2), v.z2 * std::conj(w.z1), v.z2 * std::conj(w.z2)};
}

Mat2 skew_conjugate(const Mat2& a) {
    return {std::conj(a.a22), -std::conj(a.a21), -std::conj(a.a12), std::conj(a.a11)};
}

double dist_to_h(const Mat2& a) { return (0.5 * (a - skew_conjugate(a))).frobenius_norm(); }

bool is_quaternion(const Mat2& a, double tol) {
    if (tol < 0.0) {
        tol = 1e-10 * std::max(1.0, a.op_norm());
    }
    return dist_to_h(a) <= tol;
}

// ---------------------------------------------------------------- Quaternion

Quaternion::Quaternion(CVec2 coords) : z_(coords) {
    if (!finite(z_.z1) || !finite(z_.z2)) {
        throw InvalidArgument("quaternion coordinates must be finite");
    }
}

Quaternion Quaternion::from_components(double x0, double x1, double x2, double x3) {
    return Quaternion(CVec2{{x0, x1}, {x2, x3}});
}

Quaternion Quaternion::project(const Mat2& a) {
    // (a + a~)/2 has the form [[w1, w2], [-conj w2, conj w1]] with
    // w1 = (a11 + conj a22)/2, w2 = (a12 - conj a21)/2.
    return Quaternion(0.5 * (a.a11 + std::conj(a.a22)), 0.5 * (a.a12 - std::conj(a.a21)));
}

Quaternion Quaternion::from_matrix(const Mat2& a, double tol) {
    if (!is_quaternion(a, tol)) {
        throw InvalidArgument("matrix is not a quaternion");
    }
    return project(a);
}

std::array<double, 4> Quaternion::components() const {
    return {z_.z1.real(), z_.z1.imag(), z_.z2.real(), z_.z2.imag()};
}

Mat2 Quaternion::matrix() const { return {z_.z1, z_.z2, -std::conj(z_.z2), std::conj(z_.z1)}; }

Quaternion Quaternion::star() const { return Quaternion(std::conj(z_.z1), -z_.z2); }

double Quaternion::norm() const { return qcalc::norm(z_); }

double Quaternion::norm_squared() const { return std::norm(z_.z1) + std::norm(z_.z2); }

Quaternion Quaternion::inverse() const {
    const double n2 = norm_squared();
    if (n2 == 0.0) {
        throw SingularElement("the zero quaternion has no inverse");
    }
    return (1.0 / n2) * star();
}

bool Quaternion::is_real(double tol) const { return std::abs(z_.z1.imag()) <= tol && std::abs(z_.z2) <= tol; }

Quaternion& Quaternion::operator+=(const Quaternion& p) {
    z_.z1 += p.z_.z1;
    z_.z2 += p.z_.z2;
    return *this;
}

Quaternion& Quaternion::operator-=(const Quaternion& p) {
    z_.z1 -= p.z_.z1;
    z_.z2 -= p.z_.z2;
    return *this;
}

Quaternion& Quaternion::operator*=(const Quaternion& p) { return *this = *this * p; }

Quaternion operator+(Quaternion p, const Quaternion& q) { return p += q; }
Quaternion operator-(Quaternion p, const Quaternion& q) { return p -= q; }
Quaternion operator-(const Quaternion& p) { return Quaternion(-p.z1(), -p.z2()); }

Quaternion operator*(const Quaternion& p, const Quaternion& q) {
    // First row of Q(z) Q(w).
    const Complex z1 = p.z1(), z2 = p.z2(), w1 = q.z1(), w2 = q.z2();
    return Quaternion(z1 * w1 - z2 * std::conj(w2), z1 * w2 + z2 * std::conj(w1));
}

Quaternion operator*(double s, const Quaternion& q) { return Quaternion(s * q.z1(), s * q.z2()); }

Quaternion pow(const Quaternion& q, unsigned n) {
    Quaternion result = Quaternion::unit_I();
    Quaternion base = q;
    while (n > 0) {
        if (n & 1u) {
            result *= base;
        }
        base *= base;
        n >>= 1u;
    }
    return result;
}

std::pair<Quaternion, Quaternion> split_h_ih(const Mat2& a) {
    const Mat2 at = skew_conjugate(a);
    const Quaternion b = Quaternion::project(a);
    // c = (a - a~)/(2i); its H-projection is itself.
    const Mat2 c = (a - at) * Complex(0.0, -0.5);
    return {b, Quaternion::project(c)};
}

}  // namespace qcalc
