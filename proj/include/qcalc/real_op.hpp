#pragma once

// Real n x n operators: complexification, the conjugation S -> S^flat,
// quaternionic resolvent margins, spectra and the conjugation-compatible
// analytic functional calculus F(T) = (1/2 pi i) \oint F(zeta)(zeta - T_C)^{-1} d zeta.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "qcalc/analytic.hpp"
#include "qcalc/contour.hpp"
#include "qcalc/quadrature.hpp"
#include "qcalc/quaternion.hpp"

namespace qcalc {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Square real matrix with finite entries.
class RealOperator {
public:
    RealOperator() = default;
    explicit RealOperator(RealMatrix m);
    static RealOperator identity(int n) { return RealOperator(RealMatrix::Identity(n, n)); }

    int n() const { return static_cast<int>(m_.rows()); }
    const RealMatrix& matrix() const { return m_; }

private:
    RealMatrix m_;
};

/// Square complex matrix with finite entries.
class ComplexOperator {
public:
    ComplexOperator() = default;
    explicit ComplexOperator(ComplexMatrix m);

    int n() const { return static_cast<int>(m_.rows()); }
    const ComplexMatrix& matrix() const { return m_; }

private:
    ComplexMatrix m_;
};

/// T_C(x + i y) = T x + i T y: the same matrix over C.
ComplexOperator complexify(const RealOperator& T);
/// S^flat = C S C with C the conjugation of X_C: entrywise conjugation.
ComplexOperator flat(const ComplexOperator& S);

/// sigma_min(T^2 - 2 Re(q) T + ||q||^2) / max(1, ||T||^2); zero exactly on sigma_H(T).
double q_resolvent_margin(const RealOperator& T, const Quaternion& q);

/// Smallest singular values of the 2n x 2n operators T^(2) - Q(z) and
/// T^(2) - Q(z*) with T^(2) = diag(T, T), each divided by max(1, ||T|| + ||q||).
struct QBlockMargins {
    double direct = 0.0;
    double star = 0.0;
};
QBlockMargins q_block_margins(const RealOperator& T, const Quaternion& q);

struct SpectrumReport {
    /// Eigenvalues of T_C with multiplicity; exact conjugate pairs.
    std::vector<Complex> complex_spectrum;
    /// Distinct eigenvalues (clusters within 1e-8 scale), closed under conjugation.
    std::vector<Complex> q_spectrum_descriptor;

    /// sigma(q) within tol of the descriptor.
    bool q_spectrum_contains(const Quaternion& q, double tol = 1e-8) const;
};

inline constexpr int kDenseCap = 64;

/// Dense eigenvalues of the real matrix. Throws InvalidArgument above `cap`
/// and NumericError if the eigensolver fails.
SpectrumReport complex_spectrum(const RealOperator& T, int cap = kDenseCap);

/// Operator-valued stem F(zeta) = sum_k (A_k)_C g_k(zeta), or an opaque
/// callback. Symmetric g_k and real A_k give F(conj zeta) = F(zeta)^flat.
class OperatorStem {
public:
    using Callback = std::function<ComplexMatrix(Complex)>;

    /// F(zeta) = g(zeta) I_n.
    static OperatorStem scalar(const AnalyticScalar& g, int n);
    /// Plain polynomial sum_k (A_k)_C zeta^k.
    static OperatorStem polynomial(const std::vector<RealMatrix>& coeffs);
    /// Opaque F of size n. With asserted_symmetric the relation
    /// F(conj zeta) = F(zeta)^flat is spot-checked at 32 conjugate pairs on
    /// |zeta - check_center| = check_radius (ContractViolation on failure).
    static OperatorStem callback(Callback F, int n, bool asserted_symmetric, Complex check_center = 0.0,
                                 double check_radius = 1.0);

    OperatorStem() = default;
    explicit OperatorStem(int n) : n_(n) {}

    /// Adds A_C g; A must be n x n.
    OperatorStem& add_term(const RealMatrix& A, const AnalyticScalar& g);
    /// Complex coefficients are allowed for exploration; they usually break
    /// flat invariance and are then rejected by op_calculus.
    OperatorStem& add_term(const ComplexMatrix& A, const AnalyticScalar& g);

    int n() const { return n_; }
    ComplexMatrix operator()(Complex zeta) const;
    /// All coefficients real and all g symmetric, or an asserted and checked callback.
    bool structurally_symmetric() const;
    /// F(zeta) g(zeta) (right multiplication by a scalar function).
    OperatorStem times(const AnalyticScalar& g) const;

private:
    struct Term {
        ComplexMatrix A;
        AnalyticScalar g;
        bool real_coefficient = true;
    };
    int n_ = 0;
    std::vector<Term> terms_;
    Callback callback_;
    bool callback_checked_ = false;
};

struct OpCalcResult {
    ComplexMatrix value;         ///< F(T_C)
    double flat_defect = 0.0;    ///< ||F(T_C) - F(T_C)^flat||_F
    double scale = 1.0;          ///< max(1, ||F(T_C)||_F)
    QuadratureDiagnostics diagnostics;
    Contour contour;
};

/// Contour clearance around eigenvalue clusters: max(0.1, 0.05 spectral radius).
double op_contour_clearance(const SpectrumReport& spec);

/// F(T_C) by trapezoid quadrature with one LU solve per node.
OpCalcResult op_calculus_complex(const OperatorStem& F, const RealOperator& T, const QuadratureConfig& cfg = {});

/// F(T): requires flat_defect <= flat_tol * scale (ContractViolation otherwise)
/// and returns the real part.
RealOperator op_calculus(const OperatorStem& F, const RealOperator& T, const QuadratureConfig& cfg = {},
                         double flat_tol = 1e-8);

/// 4x4 real matrix of p -> theta p on H = R^4 (basis I, J, K, L).
RealMatrix left_mult_matrix(const Quaternion& theta);
/// 4x4 real matrix of p -> p theta.
RealMatrix right_mult_matrix(const Quaternion& theta);

/// Block-diagonal multiplication operator on functions from a finite set to H.
RealOperator discrete_mult_op(const std::vector<Quaternion>& theta);

}  // namespace qcalc
