#pragma once

// Closed family of scalar analytic functions with structural symmetry
// detection. A function f is "symmetric" when f(conj z) = conj f(z), the
// condition that lets f act through the functional calculus without leaving
// the quaternions.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcalc/quaternion.hpp"

namespace qcalc {

class AnalyticScalar {
public:
    using Callback = std::function<Complex(Complex)>;

    enum class Kind { Polynomial, Exp, Sin, Cos, Affine, Sum, Product, Reflected, Opaque };

    /// The zero polynomial.
    AnalyticScalar();

    static AnalyticScalar polynomial(std::vector<Complex> coeffs);  // sum c_k z^k
    static AnalyticScalar constant(Complex c) { return polynomial({c}); }
    static AnalyticScalar identity() { return polynomial({0.0, 1.0}); }
    static AnalyticScalar monomial(unsigned k, Complex c = 1.0);
    static AnalyticScalar exp();
    static AnalyticScalar sin();
    static AnalyticScalar cos();
    /// z -> body(scale * z + shift)
    static AnalyticScalar affine(Complex scale, Complex shift, AnalyticScalar body);
    /// z -> conj(body(conj z))
    static AnalyticScalar reflected(AnalyticScalar body);

    /// User supplied function. `derivatives[k]` evaluates the (k+1)-th
    /// derivative; derivative() beyond the supplied list throws.
    /// `asserted_symmetric` is spot-checked at 32 conjugate pairs on the
    /// circle |z - check_center| = check_radius, throwing ContractViolation
    /// on mismatch.
    static AnalyticScalar opaque(Callback f, std::vector<Callback> derivatives, bool asserted_symmetric,
                                 Complex check_center = 0.0, double check_radius = 0.5);

    Complex operator()(Complex z) const;

    AnalyticScalar derivative() const;
    AnalyticScalar derivative(unsigned n) const;

    /// Structural: real-coefficient polynomials, exp/sin/cos, real affine
    /// reparametrizations and sums/products of symmetric pieces; opaque
    /// functions report their (checked) assertion.
    bool is_symmetric() const;
    bool is_zero() const;
    /// Constant polynomial value if this is one.
    std::optional<Complex> constant_value() const;

    Kind kind() const;
    std::string describe() const;

    friend AnalyticScalar operator+(const AnalyticScalar& f, const AnalyticScalar& g);
    friend AnalyticScalar operator*(const AnalyticScalar& f, const AnalyticScalar& g);
    friend AnalyticScalar operator*(Complex c, const AnalyticScalar& f);

    struct Node;

private:
    explicit AnalyticScalar(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    /// Null means the zero polynomial.
    const Node& node() const;
    std::shared_ptr<const Node> node_;
};

/// Maps z -> conj(z) and checks |f(conj z) - conj f(z)| at `pairs` points on a circle.
double symmetry_defect(const AnalyticScalar& f, Complex center, double radius, int pairs = 32);

}  // namespace qcalc
