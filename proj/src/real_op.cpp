#include "qcalc/real_op.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qcalc/errors.hpp"
#include "qcalc/spectrum.hpp"

namespace qcalc {

RealOperator::RealOperator(RealMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw InvalidArgument("operator matrix must be square and nonempty");
    }
    if (!m_.allFinite()) {
        throw InvalidArgument("operator matrix has non-finite entries");
    }
}

ComplexOperator::ComplexOperator(ComplexMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
        throw InvalidArgument("operator matrix must be square and nonempty");
    }
    if (!m_.allFinite()) {
        throw InvalidArgument("operator matrix has non-finite entries");
    }
}

ComplexOperator complexify(const RealOperator& T) { return ComplexOperator(T.matrix().cast<Complex>()); }

ComplexOperator flat(const ComplexOperator& S) { return ComplexOperator(S.matrix().conjugate()); }

namespace {

template <class M>
double sigma_min(const M& a) {
    Eigen::JacobiSVD<M> svd(a);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

template <class M>
double sigma_max(const M& a) {
    Eigen::JacobiSVD<M> svd(a);
    return svd.singularValues()(0);
}

}  // namespace

double q_resolvent_margin(const RealOperator& T, const Quaternion& q) {
    const RealMatrix& t = T.matrix();
    const int n = T.n();
    const RealMatrix m = t * t - 2.0 * q.re() * t + q.norm_squared() * RealMatrix::Identity(n, n);
    const double tn = sigma_max(t);
    return sigma_min(m) / std::max(1.0, tn * tn);
}

QBlockMargins q_block_margins(const RealOperator& T, const Quaternion& q) {
    const int n = T.n();
    const ComplexMatrix t = T.matrix().cast<Complex>();
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    auto block = [&](const CVec2& z) {
        ComplexMatrix b(2 * n, 2 * n);
        b.topLeftCorner(n, n) = t - z.z1 * I;
        b.topRightCorner(n, n) = -z.z2 * I;
        b.bottomLeftCorner(n, n) = std::conj(z.z2) * I;
        b.bottomRightCorner(n, n) = t - std::conj(z.z1) * I;
        return b;
    };
    const double scale = std::max(1.0, sigma_max(T.matrix()) + q.norm());
    return {sigma_min(block(q.coords())) / scale, sigma_min(block(q.star().coords())) / scale};
}

bool SpectrumReport::q_spectrum_contains(const Quaternion& q, double tol) const {
    const SpectrumPair sp = spectrum(q);
    auto near = [&](Complex s) {
        return std::any_of(q_spectrum_descriptor.begin(), q_spectrum_descriptor.end(),
                           [&](Complex d) { return std::abs(d - s) <= tol * std::max(1.0, std::abs(d)); });
    };
    return near(sp.s_plus) && near(sp.s_minus);
}

SpectrumReport complex_spectrum(const RealOperator& T, int cap) {
    if (T.n() > cap) {
        throw InvalidArgument("operator dimension " + std::to_string(T.n()) + " exceeds the dense cap " +
                              std::to_string(cap));
    }
    Eigen::EigenSolver<RealMatrix> es(T.matrix(), false);
    if (es.info() != Eigen::Success) {
        throw NumericError("eigenvalue iteration failed");
    }
    SpectrumReport report;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        report.complex_spectrum.push_back(es.eigenvalues()(k));
    }
    auto order = [](Complex a, Complex b) {
        if (a.real() != b.real()) {
            return a.real() < b.real();
        }
        return a.imag() < b.imag();
    };
    std::sort(report.complex_spectrum.begin(), report.complex_spectrum.end(), order);
    double radius = 0.0;
    for (Complex l : report.complex_spectrum) {
        radius = std::max(radius, std::abs(l));
    }
    const double tol = 1e-8 * std::max(1.0, radius);
    for (Complex l : report.complex_spectrum) {
        const bool seen = std::any_of(report.q_spectrum_descriptor.begin(), report.q_spectrum_descriptor.end(),
                                      [&](Complex d) { return std::abs(d - l) <= tol; });
        if (!seen) {
            report.q_spectrum_descriptor.push_back(l);
        }
    }
    for (Complex d : std::vector<Complex>(report.q_spectrum_descriptor)) {
        const bool mirrored = std::any_of(report.q_spectrum_descriptor.begin(), report.q_spectrum_descriptor.end(),
                                          [&](Complex e) { return std::abs(e - std::conj(d)) <= tol; });
        if (!mirrored) {
            throw NumericError("eigenvalues of a real matrix failed to pair under conjugation");
        }
    }
    return report;
}

// ---------------------------------------------------------------- OperatorStem

OperatorStem OperatorStem::scalar(const AnalyticScalar& g, int n) {
    OperatorStem F(n);
    F.add_term(RealMatrix(RealMatrix::Identity(n, n)), g);
    return F;
}

OperatorStem OperatorStem::polynomial(const std::vector<RealMatrix>& coeffs) {
    if (coeffs.empty()) {
        throw InvalidArgument("polynomial needs at least one coefficient");
    }
    OperatorStem F(static_cast<int>(coeffs.front().rows()));
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        F.add_term(coeffs[k], AnalyticScalar::monomial(static_cast<unsigned>(k)));
    }
    return F;
}

OperatorStem OperatorStem::callback(Callback F, int n, bool asserted_symmetric, Complex check_center,
                                    double check_radius) {
    if (!F || n <= 0) {
        throw InvalidArgument("callback stem needs a function and a positive size");
    }
    OperatorStem out(n);
    out.callback_ = std::move(F);
    if (asserted_symmetric) {
        constexpr int kPairs = 32;
        for (int k = 0; k < kPairs; ++k) {
            const Complex z = check_center + check_radius * std::polar(1.0, std::numbers::pi * (k + 0.5) / kPairs);
            const ComplexMatrix a = out.callback_(z);
            const ComplexMatrix b = out.callback_(std::conj(z));
            if (a.rows() != n || a.cols() != n) {
                throw InvalidArgument("callback returned a matrix of the wrong size");
            }
            const double defect = (b - a.conjugate()).norm();
            if (!(defect <= 1e-10 * std::max(1.0, a.norm()))) {
                throw ContractViolation("operator callback violates F(conj z) = F(z)^flat (defect " +
                                        std::to_string(defect) + ")");
            }
        }
        out.callback_checked_ = true;
    }
    return out;
}

OperatorStem& OperatorStem::add_term(const RealMatrix& A, const AnalyticScalar& g) {
    add_term(ComplexMatrix(A.cast<Complex>()), g);
    terms_.back().real_coefficient = true;
    return *this;
}

OperatorStem& OperatorStem::add_term(const ComplexMatrix& A, const AnalyticScalar& g) {
    if (A.rows() != n_ || A.cols() != n_) {
        throw InvalidArgument("stem coefficient has the wrong size");
    }
    if (!A.allFinite()) {
        throw InvalidArgument("stem coefficient has non-finite entries");
    }
    terms_.push_back(Term{A, g, A.imag().isZero(0.0)});
    return *this;
}

ComplexMatrix OperatorStem::operator()(Complex zeta) const {
    if (n_ <= 0) {
        throw InvalidArgument("empty operator stem");
    }
    ComplexMatrix out = ComplexMatrix::Zero(n_, n_);
    for (const Term& t : terms_) {
        out += t.A * t.g(zeta);
    }
    if (callback_) {
        out += callback_(zeta);
    }
    return out;
}

bool OperatorStem::structurally_symmetric() const {
    if (callback_ && !callback_checked_) {
        return false;
    }
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const Term& t) { return t.real_coefficient && t.g.is_symmetric(); });
}

OperatorStem OperatorStem::times(const AnalyticScalar& g) const {
    OperatorStem out(n_);
    for (const Term& t : terms_) {
        out.terms_.push_back(Term{t.A, t.g * g, t.real_coefficient});
    }
    if (callback_) {
        const Callback inner = callback_;
        out.callback_ = [inner, g](Complex z) { return ComplexMatrix(inner(z) * g(z)); };
        out.callback_checked_ = callback_checked_ && g.is_symmetric();
    }
    return out;
}

// ---------------------------------------------------------------- calculus

double op_contour_clearance(const SpectrumReport& spec) {
    double radius = 0.0;
    for (Complex l : spec.complex_spectrum) {
        radius = std::max(radius, std::abs(l));
    }
    return std::max(0.1, 0.05 * radius);
}

OpCalcResult op_calculus_complex(const OperatorStem& F, const RealOperator& T, const QuadratureConfig& cfg) {
    if (F.n() != T.n()) {
        throw InvalidArgument("stem and operator sizes differ");
    }
    const SpectrumReport spec = complex_spectrum(T);
    OpCalcResult out;
    out.contour = real_centered_contour(spec.q_spectrum_descriptor, op_contour_clearance(spec));
    const int n = T.n();
    const ComplexMatrix t = T.matrix().cast<Complex>();
    const ComplexMatrix I = ComplexMatrix::Identity(n, n);
    // F(zeta) (zeta - T)^{-1} = [ (zeta - T)^{-T} F(zeta)^T ]^T
    auto integrand = [&](Complex zeta) -> ComplexMatrix {
        Eigen::PartialPivLU<ComplexMatrix> lu((zeta * I - t).transpose());
        return lu.solve(F(zeta).transpose()).transpose();
    };
    out.value = integrate_circles(
        out.contour.circles, integrand, ComplexMatrix(ComplexMatrix::Zero(n, n)),
        [](const ComplexMatrix& m) { return m.norm(); }, cfg, out.diagnostics);
    out.flat_defect = (out.value - out.value.conjugate()).norm();
    out.scale = std::max(1.0, out.value.norm());
    return out;
}

RealOperator op_calculus(const OperatorStem& F, const RealOperator& T, const QuadratureConfig& cfg,
                         double flat_tol) {
    const OpCalcResult r = op_calculus_complex(F, T, cfg);
    if (!(r.flat_defect <= flat_tol * r.scale)) {
        throw ContractViolation("F(T_C) is not flat-invariant (defect " + std::to_string(r.flat_defect) +
                                "); F is outside the conjugation-compatible class");
    }
    return RealOperator(r.value.real());
}

RealMatrix left_mult_matrix(const Quaternion& theta) {
    RealMatrix m(4, 4);
    const Quaternion basis[4] = {Quaternion::unit_I(), Quaternion::unit_J(), Quaternion::unit_K(),
                                 Quaternion::unit_L()};
    for (int j = 0; j < 4; ++j) {
        const auto c = (theta * basis[j]).components();
        for (int i = 0; i < 4; ++i) {
            m(i, j) = c[i];
        }
    }
    return m;
}

RealMatrix right_mult_matrix(const Quaternion& theta) {
    RealMatrix m(4, 4);
    const Quaternion basis[4] = {Quaternion::unit_I(), Quaternion::unit_J(), Quaternion::unit_K(),
                                 Quaternion::unit_L()};
    for (int j = 0; j < 4; ++j) {
        const auto c = (basis[j] * theta).components();
        for (int i = 0; i < 4; ++i) {
            m(i, j) = c[i];
        }
    }
    return m;
}

RealOperator discrete_mult_op(const std::vector<Quaternion>& theta) {
    if (theta.empty()) {
        throw InvalidArgument("multiplication operator needs at least one point");
    }
    const int n = static_cast<int>(theta.size());
    RealMatrix m = RealMatrix::Zero(4 * n, 4 * n);
    for (int k = 0; k < n; ++k) {
        m.block(4 * k, 4 * k, 4, 4) = left_mult_matrix(theta[k]);
    }
    return RealOperator(std::move(m));
}

}  // namespace qcalc
