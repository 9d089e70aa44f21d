#pragma once

// M2-valued analytic functions on conjugate-symmetric sets, stem functions
// (F(conj z) = F(z)~) and their closed-form spectral calculus
//
//   F(q) = F(s_+) E_+ + F(s_-) E_-,
//
// which lands in H exactly when F is a stem function.

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "qcalc/analytic.hpp"
#include "qcalc/quaternion.hpp"

namespace qcalc {

struct Disk {
    Complex center;
    double radius = 0.0;
};

/// Finite union of open disks, closed under conjugation by construction.
class SymmetricDomain {
public:
    /// The whole plane.
    SymmetricDomain() = default;
    /// Each disk with a non-real center is stored together with its mirror.
    explicit SymmetricDomain(const std::vector<Disk>& disks);

    static SymmetricDomain whole_plane() { return {}; }
    static SymmetricDomain disk(Complex center, double radius) { return SymmetricDomain({Disk{center, radius}}); }

    bool is_whole_plane() const { return whole_; }
    const std::vector<Disk>& disks() const { return disks_; }

    bool contains(Complex z) const;
    /// Lower bound on the distance from z to the complement (<= 0 outside).
    double clearance(Complex z) const;
    /// True if the closed disk lies inside a single member disk.
    bool contains_closed_disk(Complex center, double radius) const;

private:
    bool whole_ = true;
    std::vector<Disk> disks_;
};

/// General analytic U -> M2, entrywise.
class MatrixFunction {
public:
    MatrixFunction() = default;
    MatrixFunction(AnalyticScalar f11, AnalyticScalar f12, AnalyticScalar f21, AnalyticScalar f22)
        : entries_{std::move(f11), std::move(f12), std::move(f21), std::move(f22)} {}

    static MatrixFunction scalar(const AnalyticScalar& f) { return {f, {}, {}, f}; }

    Mat2 operator()(Complex z) const;
    MatrixFunction derivative(unsigned n = 1) const;
    const std::array<AnalyticScalar, 4>& entries() const { return entries_; }

    friend MatrixFunction operator*(const MatrixFunction& F, const AnalyticScalar& f);

private:
    std::array<AnalyticScalar, 4> entries_;
};

struct StemReport {
    bool pass = false;
    double max_defect = 0.0;
    Complex witness;
};

/// max over samples of ||F(conj z) - F(z)~||_F compared against tol.
/// Throws InvalidArgument on an empty sample set.
StemReport verify_stem(const MatrixFunction& F, const std::vector<Complex>& samples, double tol);

/// 64 conjugate pairs on two circles inside the domain (deterministic).
std::vector<Complex> stem_validation_samples(const SymmetricDomain& domain);

/// Analytic stem function U -> M2. Every value satisfies F(conj z) = F(z)~
/// (structurally, or validated at construction).
class StemFunction {
public:
    struct ScalarTimesI {
        AnalyticScalar f;
    };
    struct Pair {
        AnalyticScalar f1, f2;
    };
    struct HPolynomial {
        std::vector<Quaternion> coeffs;  // left coefficients: sum a_k z^k
    };
    struct GeneralMat2 {
        MatrixFunction F;
    };
    using Repr = std::variant<ScalarTimesI, Pair, HPolynomial, GeneralMat2>;

    /// f I; f must be symmetric, otherwise ContractViolation.
    static StemFunction scalar(const AnalyticScalar& f, SymmetricDomain domain = {});
    /// F(z) = [[f1(z), f2(z)], [-conj f2(conj z), conj f1(conj z)]]; always a stem.
    static StemFunction pair(const AnalyticScalar& f1, const AnalyticScalar& f2, SymmetricDomain domain = {});
    static StemFunction hpolynomial(std::vector<Quaternion> coeffs);
    /// Validates at stem_validation_samples(domain); throws ContractViolation on failure.
    static StemFunction general(const MatrixFunction& F, SymmetricDomain domain = {}, double tol = 1e-10);

    Mat2 operator()(Complex z) const;
    StemFunction derivative(unsigned n = 1) const;
    MatrixFunction as_matrix_function() const;

    const Repr& repr() const { return repr_; }
    const SymmetricDomain& domain() const { return domain_; }

    /// (F f)(z) = F(z) f(z) for symmetric f (again a stem function).
    friend StemFunction operator*(const StemFunction& F, const AnalyticScalar& f);

private:
    StemFunction(Repr r, SymmetricDomain d) : repr_(std::move(r)), domain_(std::move(d)) {}
    Repr repr_;
    SymmetricDomain domain_;
};

/// make_stem_pair(f1, f2)
inline StemFunction make_stem_pair(const AnalyticScalar& f1, const AnalyticScalar& f2) {
    return StemFunction::pair(f1, f2);
}

/// Pointwise decomposition F = F1 + i F2 with F1, F2 H-valued:
/// F1(z) = (F(z) + F(z)~)/2, F2(z) = (F(z) - F(z)~)/(2i).
/// The parts are real-analytic, not holomorphic, so they are returned as
/// evaluators rather than stem functions.
struct StemSplit {
    std::function<Quaternion(Complex)> first;
    std::function<Quaternion(Complex)> second;
};

StemSplit stem_split(const StemFunction& F);
/// Validates F first; ContractViolation if it is not a stem.
StemSplit stem_split(const MatrixFunction& F, const SymmetricDomain& domain = {});

/// F(s_+) E_+ + F(s_-) E_-; for real q this is F(s) I.
Mat2 eval_spectral(const StemFunction& F, const Quaternion& q);
Mat2 eval_spectral(const MatrixFunction& F, const Quaternion& q, const SymmetricDomain& domain = {});
/// Same calculus for an arbitrary evaluator (used for resolvent kernels and tests).
Mat2 eval_spectral(const std::function<Mat2(Complex)>& F, const Quaternion& q);

/// Projects eval_spectral onto H (valid for stem functions).
Quaternion eval_quaternion(const StemFunction& F, const Quaternion& q);

/// sum a_n q^n with left coefficients (Horner).
Quaternion hpoly_eval(const std::vector<Quaternion>& coeffs, const Quaternion& q);

/// sigma(q) inside the zero set of F: max-entry |F(s_pm)| <= tol.
bool zero_set_contains(const StemFunction& F, const Quaternion& q, double tol);

}  // namespace qcalc
