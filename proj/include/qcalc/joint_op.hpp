#pragma once

// Commuting pairs of real operators: the joint quaternionic resolvent, joint
// eigenvalues and a Martinelli-type functional calculus
//
//   f(T_C) = (2 pi i)^{-2} \int_Sigma f(z) L(z)^{-2} [(conj z1 - T1) d conj z2 - (conj z2 - T2) d conj z1] dz1 dz2,
//
// with L(z) = (T1 - z1)(T1 - conj z1) + (T2 - z2)(T2 - conj z2), integrated
// over a sphere in C^2 with real center.

#include <cstdint>
#include <vector>

#include "qcalc/analytic.hpp"
#include "qcalc/real_op.hpp"

namespace qcalc {

class CommutingPair {
public:
    /// Throws InvalidArgument on a size mismatch or ||T1 T2 - T2 T1|| > 1e-12 scale.
    CommutingPair(RealOperator T1, RealOperator T2);

    const RealOperator& T1() const { return t1_; }
    const RealOperator& T2() const { return t2_; }
    int n() const { return t1_.n(); }

private:
    RealOperator t1_;
    RealOperator t2_;
};

/// [[T1, T2], [-T2, T1]] on X_C^2.
ComplexOperator pair_q_matrix(const CommutingPair& P);

/// L(z) = T1^2 + T2^2 - 2 Re z1 T1 - 2 Re z2 T2 + (|z1|^2 + |z2|^2) I.
RealMatrix joint_pencil(const CommutingPair& P, const CVec2& z);

/// sigma_min(L(z)) / max(1, ||T1||^2 + ||T2||^2).
double joint_resolvent_margin(const CommutingPair& P, const CVec2& z);

/// Factors with A B = L(z) (x) I:
///   A = Q(T_C) - Q(z) = [[T1 - z1, T2 - z2], [-(T2 - conj z2), T1 - conj z1]],
///   B = [[T1 - conj z1, -(T2 - z2)], [T2 - conj z2, T1 - z1]].
struct PairBlockFactors {
    ComplexMatrix A;
    ComplexMatrix B;
};
PairBlockFactors pair_block_factors(const CommutingPair& P, const CVec2& z);

/// Smallest singular values divided by max(1, ||T1|| + ||T2|| + ||z||):
/// direct = A, cofactor = B, star = Q(T_C) - Q(z*).
struct PairBlockMargins {
    double direct = 0.0;
    double cofactor = 0.0;
    double star = 0.0;
};
PairBlockMargins pair_block_margins(const CommutingPair& P, const CVec2& z);

/// Joint eigenvalues from eigenvectors of T1 + mu T2 for a random complex mu,
/// each verified as a joint eigenvector of T1 and T2. Retries with fresh mu
/// up to 8 times, then NumericError. Sorted and deduplicated.
std::vector<CVec2> joint_spectrum_points(const CommutingPair& P, std::uint64_t seed = 0x6a09e667f3bcc908ULL,
                                         int cap = kDenseCap);

/// Two-variable analytic function: polynomial part plus separable products.
class Analytic2 {
public:
    struct Monomial {
        Complex c;
        unsigned a = 0;
        unsigned b = 0;
    };
    struct Separable {
        Complex c;
        AnalyticScalar f;
        AnalyticScalar g;
    };

    static Analytic2 constant(Complex c);
    /// c z1^a z2^b
    static Analytic2 monomial(unsigned a, unsigned b, Complex c = 1.0);
    /// c f(z1) g(z2)
    static Analytic2 separable(const AnalyticScalar& f, const AnalyticScalar& g, Complex c = 1.0);

    Complex operator()(Complex z1, Complex z2) const;
    /// f(conj z) = conj f(z) structurally (real coefficients, symmetric factors).
    bool is_symmetric() const;

    const std::vector<Monomial>& monomials() const { return poly_; }
    const std::vector<Separable>& products() const { return products_; }

    friend Analytic2 operator+(Analytic2 f, const Analytic2& g);

private:
    std::vector<Monomial> poly_;
    std::vector<Separable> products_;
};

struct SphereGrid {
    double c1 = 0.0;
    double c2 = 0.0;
    double radius = 1.0;
    int resolution = 48;  ///< nodes per angle

    /// Center at the mean real part of the joint eigenvalues and radius
    /// max_k (||Re lambda_k - c|| + ||Im lambda_k||) + 1, which keeps L(z)
    /// invertible on the sphere. Falls back to a norm bound when the joint
    /// eigenvalues cannot be computed.
    static SphereGrid enclosing(const CommutingPair& P, int resolution = 48);
};

struct MartinelliResult {
    ComplexMatrix value;
    double imag_residue = 0.0;  ///< ||Im value||_F
    double scale = 1.0;         ///< max(1, ||value||_F)
    long long nodes = 0;
};

/// Complex-valued integral. Throws GeometryError if the sphere does not
/// enclose the joint spectrum with clearance 1/2 or L(z) is singular at a node.
MartinelliResult martinelli_complex(const Analytic2& f, const CommutingPair& P, const SphereGrid& grid);

/// Real restriction: AccuracyError (carrying the measured residue) when
/// ||Im value|| > imag_tol * scale.
RealOperator martinelli_calculus(const Analytic2& f, const CommutingPair& P, const SphereGrid& grid,
                                 double imag_tol = 1e-8);

}  // namespace qcalc
