#pragma once

// Hamilton's algebra realized as the real subalgebra H of 2x2 complex
// matrices generated by
//
//   I = [[1, 0], [0, 1]],  J = [[i, 0], [0, -i]],
//   K = [[0, 1], [-1, 0]], L = [[0, i], [i, 0]],
//
// with J^2 = K^2 = L^2 = -I and JK = L, KL = J, LJ = K. A quaternion is stored
// through its coordinates z = (z1, z2) in C^2, i.e. q = Q(z) = [[z1, z2], [-conj z2, conj z1]].

#include <array>
#include <complex>
#include <utility>

namespace qcalc {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

struct CVec2 {
    Complex z1{};
    Complex z2{};

    friend bool operator==(const CVec2&, const CVec2&) = default;
};

/// <w, v> = w1 conj(v1) + w2 conj(v2)
Complex inner(const CVec2& w, const CVec2& v);
double norm(const CVec2& v);

/// General element of M2 (row-major entries).
struct Mat2 {
    Complex a11{}, a12{}, a21{}, a22{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }
    static Mat2 diag(Complex d1, Complex d2) { return {d1, 0.0, 0.0, d2}; }

    Mat2& operator+=(const Mat2& b);
    Mat2& operator-=(const Mat2& b);
    Mat2& operator*=(Complex s);

    Mat2 adjoint() const;
    Complex det() const;
    Complex trace() const { return a11 + a22; }
    Mat2 inverse() const;
    CVec2 apply(const CVec2& w) const;

    double frobenius_norm() const;
    /// Spectral norm (largest singular value).
    double op_norm() const;
    double max_abs() const;
    bool is_finite() const;

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2 operator+(Mat2 a, const Mat2& b);
Mat2 operator-(Mat2 a, const Mat2& b);
Mat2 operator-(const Mat2& a);
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(Complex s, Mat2 a);
Mat2 operator*(Mat2 a, Complex s);
Mat2 outer(const CVec2& v, const CVec2& w);  // v w^H

/// Skew complex conjugation [[a1, a2], [a3, a4]] -> [[conj a4, -conj a3], [-conj a2, conj a1]].
/// Conjugate-linear, multiplicative, unital, isometric involution whose fixed points are exactly H.
Mat2 skew_conjugate(const Mat2& a);

/// Frobenius norm of the iH-component (a - a~)/2 of the direct sum M2 = H + iH.
double dist_to_h(const Mat2& a);

/// dist_to_h(a) <= tol, with tol defaulting to 1e-10 * max(1, ||a||).
bool is_quaternion(const Mat2& a, double tol = -1.0);

class Quaternion {
public:
    constexpr Quaternion() = default;
    explicit Quaternion(CVec2 coords);
    Quaternion(Complex z1, Complex z2) : Quaternion(CVec2{z1, z2}) {}

    /// x0 I + x1 J + x2 K + x3 L; throws InvalidArgument on non-finite input.
    static Quaternion from_components(double x0, double x1, double x2, double x3);
    static Quaternion real(double x) { return from_components(x, 0, 0, 0); }
    static Quaternion unit_I() { return from_components(1, 0, 0, 0); }
    static Quaternion unit_J() { return from_components(0, 1, 0, 0); }
    static Quaternion unit_K() { return from_components(0, 0, 1, 0); }
    static Quaternion unit_L() { return from_components(0, 0, 0, 1); }

    /// Projection (a + a~)/2 of an arbitrary matrix onto H.
    static Quaternion project(const Mat2& a);
    /// Accepts a only if it lies in H within tol (default as in is_quaternion).
    static Quaternion from_matrix(const Mat2& a, double tol = -1.0);

    const CVec2& coords() const { return z_; }
    Complex z1() const { return z_.z1; }
    Complex z2() const { return z_.z2; }
    std::array<double, 4> components() const;
    double re() const { return z_.z1.real(); }

    Mat2 matrix() const;
    Quaternion star() const;  // Q(z*) with z* = (conj z1, -z2)
    double norm() const;      // = ||z|| = operator norm of matrix()
    double norm_squared() const;
    Quaternion inverse() const;  // throws SingularElement for q = 0
    bool is_real(double tol = 0.0) const;

    Quaternion& operator+=(const Quaternion& p);
    Quaternion& operator-=(const Quaternion& p);
    Quaternion& operator*=(const Quaternion& p);

    friend bool operator==(const Quaternion&, const Quaternion&) = default;

private:
    CVec2 z_{};
};

Quaternion operator+(Quaternion p, const Quaternion& q);
Quaternion operator-(Quaternion p, const Quaternion& q);
Quaternion operator-(const Quaternion& p);
Quaternion operator*(const Quaternion& p, const Quaternion& q);
Quaternion operator*(double s, const Quaternion& q);
Quaternion pow(const Quaternion& q, unsigned n);

/// Split of M2 = H + iH: a = b + i c with b, c quaternions.
std::pair<Quaternion, Quaternion> split_h_ih(const Mat2& a);

}  // namespace qcalc
