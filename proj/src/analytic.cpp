#include "qcalc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qcalc/errors.hpp"

namespace qcalc {

struct AnalyticScalar::Node {
    Kind kind = Kind::Polynomial;
    std::vector<Complex> coeffs;  // Polynomial
    Complex scale{1.0}, shift{};  // Affine
    AnalyticScalar lhs, rhs;      // Affine/Reflected body in lhs; Sum/Product operands
    Callback fn;                  // Opaque
    std::vector<Callback> derivs;
    bool symmetric = false;
};

namespace {

using Node = AnalyticScalar::Node;

std::vector<Complex> trimmed(std::vector<Complex> c) {
    while (!c.empty() && c.back() == Complex{}) {
        c.pop_back();
    }
    return c;
}

}  // namespace

AnalyticScalar::AnalyticScalar() = default;

const AnalyticScalar::Node& AnalyticScalar::node() const {
    static const Node zero;
    return node_ ? *node_ : zero;
}

AnalyticScalar AnalyticScalar::polynomial(std::vector<Complex> coeffs) {
    for (const Complex& c : coeffs) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw InvalidArgument("polynomial coefficients must be finite");
        }
    }
    auto n = std::make_shared<Node>();
    n->coeffs = trimmed(std::move(coeffs));
    return AnalyticScalar(std::move(n));
}

AnalyticScalar AnalyticScalar::monomial(unsigned k, Complex c) {
    std::vector<Complex> coeffs(k + 1, Complex{});
    coeffs[k] = c;
    return polynomial(std::move(coeffs));
}

AnalyticScalar AnalyticScalar::exp() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Exp;
    return AnalyticScalar(std::move(n));
}

AnalyticScalar AnalyticScalar::sin() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sin;
    return AnalyticScalar(std::move(n));
}

AnalyticScalar AnalyticScalar::cos() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Cos;
    return AnalyticScalar(std::move(n));
}

AnalyticScalar AnalyticScalar::affine(Complex scale, Complex shift, AnalyticScalar body) {
    if (scale == Complex(1.0) && shift == Complex{}) {
        return body;
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Affine;
    n->scale = scale;
    n->shift = shift;
    n->lhs = std::move(body);
    return AnalyticScalar(std::move(n));
}

AnalyticScalar AnalyticScalar::reflected(AnalyticScalar body) {
    if (body.is_symmetric()) {
        return body;
    }
    if (body.kind() == Kind::Polynomial) {
        std::vector<Complex> c = body.node().coeffs;
        for (auto& x : c) {
            x = std::conj(x);
        }
        return polynomial(std::move(c));
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Reflected;
    n->lhs = std::move(body);
    return AnalyticScalar(std::move(n));
}

AnalyticScalar AnalyticScalar::opaque(Callback f, std::vector<Callback> derivatives, bool asserted_symmetric,
                                      Complex check_center, double check_radius) {
    if (!f) {
        throw InvalidArgument("opaque function needs an evaluation callback");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Opaque;
    n->fn = std::move(f);
    n->derivs = std::move(derivatives);
    n->symmetric = asserted_symmetric;
    AnalyticScalar result(std::move(n));
    if (asserted_symmetric) {
        const double defect = symmetry_defect(result, check_center, check_radius);
        if (!(defect <= 1e-10)) {
            throw ContractViolation("opaque function asserted symmetric but f(conj z) != conj f(z) (defect " +
                                    std::to_string(defect) + ")");
        }
    }
    return result;
}

Complex AnalyticScalar::operator()(Complex z) const {
    const Node& n = node();
    switch (n.kind) {
        case Kind::Polynomial: {
            Complex acc{};
            for (auto it = n.coeffs.rbegin(); it != n.coeffs.rend(); ++it) {
                acc = acc * z + *it;
            }
            return acc;
        }
        case Kind::Exp:
            return std::exp(z);
        case Kind::Sin:
            return std::sin(z);
        case Kind::Cos:
            return std::cos(z);
        case Kind::Affine:
            return n.lhs(n.scale * z + n.shift);
        case Kind::Sum:
            return n.lhs(z) + n.rhs(z);
        case Kind::Product:
            return n.lhs(z) * n.rhs(z);
        case Kind::Reflected:
            return std::conj(n.lhs(std::conj(z)));
        case Kind::Opaque:
            return n.fn(z);
    }
    return {};
}

AnalyticScalar AnalyticScalar::derivative() const {
    const Node& n = node();
    switch (n.kind) {
        case Kind::Polynomial: {
            std::vector<Complex> d;
            for (std::size_t k = 1; k < n.coeffs.size(); ++k) {
                d.push_back(static_cast<double>(k) * n.coeffs[k]);
            }
            return polynomial(std::move(d));
        }
        case Kind::Exp:
            return exp();
        case Kind::Sin:
            return cos();
        case Kind::Cos:
            return Complex(-1.0) * sin();
        case Kind::Affine:
            return n.scale * affine(n.scale, n.shift, n.lhs.derivative());
        case Kind::Sum:
            return n.lhs.derivative() + n.rhs.derivative();
        case Kind::Product: {
            if (n.lhs.constant_value()) {
                return n.lhs * n.rhs.derivative();
            }
            return n.lhs.derivative() * n.rhs + n.lhs * n.rhs.derivative();
        }
        case Kind::Reflected:
            return reflected(n.lhs.derivative());
        case Kind::Opaque: {
            if (n.derivs.empty()) {
                throw InvalidArgument("opaque function: no further derivative callback supplied");
            }
            auto d = std::make_shared<Node>();
            d->kind = Kind::Opaque;
            d->fn = n.derivs.front();
            d->derivs.assign(n.derivs.begin() + 1, n.derivs.end());
            d->symmetric = n.symmetric;
            return AnalyticScalar(std::move(d));
        }
    }
    return {};
}

AnalyticScalar AnalyticScalar::derivative(unsigned order) const {
    AnalyticScalar f = *this;
    for (unsigned k = 0; k < order; ++k) {
        f = f.derivative();
    }
    return f;
}

bool AnalyticScalar::is_symmetric() const {
    const Node& n = node();
    switch (n.kind) {
        case Kind::Polynomial:
            return std::all_of(n.coeffs.begin(), n.coeffs.end(), [](Complex c) { return c.imag() == 0.0; });
        case Kind::Exp:
        case Kind::Sin:
        case Kind::Cos:
            return true;
        case Kind::Affine:
            return n.scale.imag() == 0.0 && n.shift.imag() == 0.0 && n.lhs.is_symmetric();
        case Kind::Sum:
        case Kind::Product:
            return n.lhs.is_symmetric() && n.rhs.is_symmetric();
        case Kind::Reflected:
            return n.lhs.is_symmetric();
        case Kind::Opaque:
            return n.symmetric;
    }
    return false;
}

bool AnalyticScalar::is_zero() const { return node().kind == Kind::Polynomial && node().coeffs.empty(); }

std::optional<Complex> AnalyticScalar::constant_value() const {
    if (node().kind != Kind::Polynomial || node().coeffs.size() > 1) {
        return std::nullopt;
    }
    return node().coeffs.empty() ? Complex{} : node().coeffs.front();
}

AnalyticScalar::Kind AnalyticScalar::kind() const { return node().kind; }

std::string AnalyticScalar::describe() const {
    const Node& n = node();
    std::ostringstream os;
    switch (n.kind) {
        case Kind::Polynomial: {
            os << "poly[";
            for (std::size_t k = 0; k < n.coeffs.size(); ++k) {
                os << (k ? "," : "") << n.coeffs[k];
            }
            os << "]";
            break;
        }
        case Kind::Exp:
            os << "exp";
            break;
        case Kind::Sin:
            os << "sin";
            break;
        case Kind::Cos:
            os << "cos";
            break;
        case Kind::Affine:
            os << n.lhs.describe() << "(" << n.scale << "*z+" << n.shift << ")";
            break;
        case Kind::Sum:
            os << "(" << n.lhs.describe() << " + " << n.rhs.describe() << ")";
            break;
        case Kind::Product:
            os << "(" << n.lhs.describe() << " * " << n.rhs.describe() << ")";
            break;
        case Kind::Reflected:
            os << "reflect(" << n.lhs.describe() << ")";
            break;
        case Kind::Opaque:
            os << "opaque";
            break;
    }
    return os.str();
}

AnalyticScalar operator+(const AnalyticScalar& f, const AnalyticScalar& g) {
    if (f.is_zero()) {
        return g;
    }
    if (g.is_zero()) {
        return f;
    }
    using Kind = AnalyticScalar::Kind;
    if (f.kind() == Kind::Polynomial && g.kind() == Kind::Polynomial) {
        const auto& a = f.node().coeffs;
        const auto& b = g.node().coeffs;
        std::vector<Complex> c(std::max(a.size(), b.size()), Complex{});
        for (std::size_t k = 0; k < a.size(); ++k) c[k] += a[k];
        for (std::size_t k = 0; k < b.size(); ++k) c[k] += b[k];
        return AnalyticScalar::polynomial(std::move(c));
    }
    auto n = std::make_shared<AnalyticScalar::Node>();
    n->kind = Kind::Sum;
    n->lhs = f;
    n->rhs = g;
    return AnalyticScalar(std::move(n));
}

AnalyticScalar operator*(const AnalyticScalar& f, const AnalyticScalar& g) {
    if (f.is_zero() || g.is_zero()) {
        return {};
    }
    using Kind = AnalyticScalar::Kind;
    if (f.kind() == Kind::Polynomial && g.kind() == Kind::Polynomial) {
        const auto& a = f.node().coeffs;
        const auto& b = g.node().coeffs;
        std::vector<Complex> c(a.size() + b.size() - 1, Complex{});
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                c[i + j] += a[i] * b[j];
            }
        }
        return AnalyticScalar::polynomial(std::move(c));
    }
    if (auto c = g.constant_value()) {
        return *c * f;
    }
    if (auto c = f.constant_value()) {
        if (*c == Complex(1.0)) {
            return g;
        }
        // Fold nested constant factors so repeated differentiation stays flat.
        if (g.kind() == Kind::Product) {
            if (auto inner = g.node().lhs.constant_value()) {
                return (*c * *inner) * g.node().rhs;
            }
        }
    }
    auto n = std::make_shared<AnalyticScalar::Node>();
    n->kind = Kind::Product;
    n->lhs = f;
    n->rhs = g;
    return AnalyticScalar(std::move(n));
}

AnalyticScalar operator*(Complex c, const AnalyticScalar& f) {
    if (c == Complex(1.0)) {
        return f;
    }
    if (f.kind() == AnalyticScalar::Kind::Polynomial) {
        std::vector<Complex> coeffs = f.node().coeffs;
        for (auto& x : coeffs) {
            x *= c;
        }
        return AnalyticScalar::polynomial(std::move(coeffs));
    }
    auto n = std::make_shared<AnalyticScalar::Node>();
    n->kind = AnalyticScalar::Kind::Product;
    n->lhs = AnalyticScalar::constant(c);
    n->rhs = f;
    if (f.kind() == AnalyticScalar::Kind::Product) {
        if (auto inner = f.node().lhs.constant_value()) {
            n->lhs = AnalyticScalar::constant(c * *inner);
            n->rhs = f.node().rhs;
        }
    }
    return AnalyticScalar(std::move(n));
}

double symmetry_defect(const AnalyticScalar& f, Complex center, double radius, int pairs) {
    double worst = 0.0;
    for (int k = 0; k < pairs; ++k) {
        // Offset by half a step so no sample sits on the real axis.
        const double theta = std::numbers::pi * (k + 0.5) / pairs;
        const Complex z = center + radius * std::polar(1.0, theta);
        const Complex fz = f(z);
        const double scale = std::max(1.0, std::abs(fz));
        worst = std::max(worst, std::abs(f(std::conj(z)) - std::conj(fz)) / scale);
    }
    return worst;
}

}  // namespace qcalc
