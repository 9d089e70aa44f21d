#pragma once

// Trapezoidal rule on positively oriented circles with nested node doubling.
//
// For a circle z = c + r e^{i theta} the contour integral
//   (1/2 pi i) \oint g(z) dz = (1/2 pi) \int_0^{2 pi} g(z(theta)) r e^{i theta} d theta
// is approximated by (1/N) sum_k g(z_k) r e^{i theta_k}; for g analytic in an
// annulus around the circle the error decays geometrically in N.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace qcalc {

struct Circle {
    std::complex<double> center;
    double radius = 0.0;
    int orientation = +1;
};

struct QuadratureConfig {
    int nodes_per_circle = 1024;  ///< first level; power of two >= 16
    int max_nodes = 1 << 18;
    double rel_tol = 1e-10;

    void validate() const;
};

struct QuadratureDiagnostics {
    int nodes_per_circle = 0;       ///< nodes per circle at the accepted level
    double estimated_error = 0.0;   ///< change between the last two levels
    bool converged = false;
};

namespace detail {

/// Kahan-compensated accumulator; T needs +, - and a zero value.
template <class T>
struct Compensated {
    T sum;
    T carry;

    explicit Compensated(const T& zero) : sum(zero), carry(zero) {}

    void add(const T& term) {
        const T y = term - carry;
        const T t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace detail

/// Integrates (1/2 pi i) sum_circles \oint g(z) dz, doubling the node count
/// until two successive levels differ by <= rel_tol * max(1, |value|) in the
/// supplied norm, or max_nodes is reached (then diagnostics.converged = false).
/// Evaluation and reduction order are fixed, so results are deterministic.
template <class T, class Integrand, class Norm>
T integrate_circles(const std::vector<Circle>& circles, Integrand&& g, const T& zero, Norm&& norm,
                    const QuadratureConfig& cfg, QuadratureDiagnostics& diag) {
    cfg.validate();
    using C = std::complex<double>;
    std::vector<detail::Compensated<T>> raw(circles.size(), detail::Compensated<T>(zero));

    auto add_nodes = [&](int n_total, int start, int stride) {
        for (std::size_t c = 0; c < circles.size(); ++c) {
            const Circle& circ = circles[c];
            for (int k = start; k < n_total; k += stride) {
                const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / n_total;
                const C e = std::polar(1.0, theta * circ.orientation);
                const C z = circ.center + circ.radius * e;
                raw[c].add(g(z) * C(circ.radius * circ.orientation) * e);
            }
        }
    };
    auto estimate = [&](int n) {
        T total = zero;
        for (const auto& acc : raw) {
            total = total + acc.sum;
        }
        return T(total * C(1.0 / n));
    };

    int n = cfg.nodes_per_circle;
    add_nodes(n, 0, 1);
    T previous = estimate(n);
    diag = {};
    while (2 * n <= cfg.max_nodes) {
        add_nodes(2 * n, 1, 2);
        n *= 2;
        T current = estimate(n);
        const double change = norm(T(current - previous));
        diag.nodes_per_circle = n;
        diag.estimated_error = change;
        if (change <= cfg.rel_tol * std::max(1.0, norm(current))) {
            diag.converged = true;
            return current;
        }
        previous = current;
    }
    diag.nodes_per_circle = n;
    return previous;
}

}  // namespace qcalc
