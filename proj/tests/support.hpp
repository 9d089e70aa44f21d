#pragma once

#include <random>

#include "qcalc/quaternion.hpp"

namespace qtest {

using qcalc::Complex;
using qcalc::Mat2;
using qcalc::Quaternion;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo = -1.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
    double normal() { return std::normal_distribution<double>()(gen_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
    Complex complex(double scale = 1.0) { return {uniform(-scale, scale), uniform(-scale, scale)}; }
    Quaternion quaternion(double scale = 1.0) {
        return Quaternion::from_components(uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale),
                                           uniform(-scale, scale));
    }
    Mat2 mat2(double scale = 1.0) { return {complex(scale), complex(scale), complex(scale), complex(scale)}; }
    /// Uniform on the unit sphere of imaginary quaternions.
    Quaternion imaginary_unit() {
        double a = normal(), b = normal(), c = normal();
        const double n = std::sqrt(a * a + b * b + c * c);
        return Quaternion::from_components(0.0, a / n, b / n, c / n);
    }
    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
};

/// Entrywise 2x2 product written out, independent of Mat2::operator*.
inline Mat2 mul_oracle(const Mat2& a, const Mat2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22, a.a21 * b.a11 + a.a22 * b.a21,
            a.a21 * b.a12 + a.a22 * b.a22};
}

inline double diff(const Mat2& a, const Mat2& b) { return (a - b).frobenius_norm(); }
inline double diff(const Quaternion& a, const Quaternion& b) { return (a - b).norm(); }

/// Matrix view from components via the basis matrices I, J, K, L.
inline Mat2 basis_view(double x0, double x1, double x2, double x3) {
    const Complex i{0.0, 1.0};
    const Mat2 I{1.0, 0.0, 0.0, 1.0};
    const Mat2 J{i, 0.0, 0.0, -i};
    const Mat2 K{0.0, 1.0, -1.0, 0.0};
    const Mat2 L{0.0, i, i, 0.0};
    return x0 * I + x1 * J + x2 * K + x3 * L;
}

}  // namespace qtest
