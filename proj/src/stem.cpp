#include "qcalc/stem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qcalc/errors.hpp"
#include "qcalc/spectrum.hpp"

namespace qcalc {

// ---------------------------------------------------------------- SymmetricDomain

SymmetricDomain::SymmetricDomain(const std::vector<Disk>& disks) : whole_(false) {
    for (const Disk& d : disks) {
        if (!(d.radius > 0.0) || !std::isfinite(d.radius)) {
            throw InvalidArgument("domain disks need a positive finite radius");
        }
        disks_.push_back(d);
        if (d.center.imag() != 0.0) {
            disks_.push_back(Disk{std::conj(d.center), d.radius});
        }
    }
}

bool SymmetricDomain::contains(Complex z) const { return clearance(z) > 0.0; }

double SymmetricDomain::clearance(Complex z) const {
    if (whole_) {
        return std::numeric_limits<double>::infinity();
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const Disk& d : disks_) {
        best = std::max(best, d.radius - std::abs(z - d.center));
    }
    return best;
}

bool SymmetricDomain::contains_closed_disk(Complex center, double radius) const {
    if (whole_) {
        return true;
    }
    return std::any_of(disks_.begin(), disks_.end(),
                       [&](const Disk& d) { return std::abs(center - d.center) + radius < d.radius; });
}

// ---------------------------------------------------------------- MatrixFunction

Mat2 MatrixFunction::operator()(Complex z) const {
    return {entries_[0](z), entries_[1](z), entries_[2](z), entries_[3](z)};
}

MatrixFunction MatrixFunction::derivative(unsigned n) const {
    return {entries_[0].derivative(n), entries_[1].derivative(n), entries_[2].derivative(n),
            entries_[3].derivative(n)};
}

MatrixFunction operator*(const MatrixFunction& F, const AnalyticScalar& f) {
    const auto& e = F.entries();
    return {e[0] * f, e[1] * f, e[2] * f, e[3] * f};
}

// ---------------------------------------------------------------- validation

StemReport verify_stem(const MatrixFunction& F, const std::vector<Complex>& samples, double tol) {
    if (samples.empty()) {
        throw InvalidArgument("verify_stem needs at least one sample");
    }
    StemReport report;
    report.max_defect = -1.0;
    for (const Complex& z : samples) {
        const double defect = (F(std::conj(z)) - skew_conjugate(F(z))).frobenius_norm();
        if (defect > report.max_defect || std::isnan(defect)) {
            report.max_defect = defect;
            report.witness = z;
        }
    }
    report.pass = report.max_defect <= tol;
    return report;
}

std::vector<Complex> stem_validation_samples(const SymmetricDomain& domain) {
    Complex center = 0.0;
    std::array<double, 2> radii{0.5, 1.5};
    if (!domain.is_whole_plane()) {
        const auto& disks = domain.disks();
        auto it = std::find_if(disks.begin(), disks.end(), [](const Disk& d) { return d.center.imag() == 0.0; });
        const Disk& d = it != disks.end() ? *it : disks.front();
        center = d.center;
        radii = {0.3 * d.radius, 0.7 * d.radius};
    }
    constexpr int kPairsPerCircle = 32;
    std::mt19937_64 rng(0x5eed5eedULL);
    std::uniform_real_distribution<double> jitter(0.1, 0.9);
    std::vector<Complex> samples;
    samples.reserve(4 * kPairsPerCircle);
    for (double r : radii) {
        for (int k = 0; k < kPairsPerCircle; ++k) {
            const double theta = std::numbers::pi * (k + jitter(rng)) / kPairsPerCircle;
            const Complex z = center + r * std::polar(1.0, theta);
            samples.push_back(z);
            samples.push_back(std::conj(z));
        }
    }
    return samples;
}

// ---------------------------------------------------------------- StemFunction

StemFunction StemFunction::scalar(const AnalyticScalar& f, SymmetricDomain domain) {
    if (!f.is_symmetric()) {
        throw ContractViolation("f I is a stem function only for symmetric f (f(conj z) = conj f(z))");
    }
    return StemFunction(ScalarTimesI{f}, std::move(domain));
}

StemFunction StemFunction::pair(const AnalyticScalar& f1, const AnalyticScalar& f2, SymmetricDomain domain) {
    return StemFunction(Pair{f1, f2}, std::move(domain));
}

StemFunction StemFunction::hpolynomial(std::vector<Quaternion> coeffs) {
    return StemFunction(HPolynomial{std::move(coeffs)}, SymmetricDomain{});
}

StemFunction StemFunction::general(const MatrixFunction& F, SymmetricDomain domain, double tol) {
    const StemReport report = verify_stem(F, stem_validation_samples(domain), tol);
    if (!report.pass) {
        throw ContractViolation("matrix function is not a stem function (defect " +
                                std::to_string(report.max_defect) + ")");
    }
    return StemFunction(GeneralMat2{F}, std::move(domain));
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Mat2 StemFunction::operator()(Complex z) const {
    return std::visit(overloaded{
                          [&](const ScalarTimesI& s) { return Mat2::identity() * s.f(z); },
                          [&](const Pair& p) {
                              const Complex zb = std::conj(z);
                              return Mat2{p.f1(z), p.f2(z), -std::conj(p.f2(zb)), std::conj(p.f1(zb))};
                          },
                          [&](const HPolynomial& h) {
                              Mat2 acc;
                              for (auto it = h.coeffs.rbegin(); it != h.coeffs.rend(); ++it) {
                                  acc = acc * z + it->matrix();
                              }
                              return acc;
                          },
                          [&](const GeneralMat2& g) { return g.F(z); },
                      },
                      repr_);
}

StemFunction StemFunction::derivative(unsigned n) const {
    if (n == 0) {
        return *this;
    }
    Repr r = std::visit(overloaded{
                            [&](const ScalarTimesI& s) -> Repr { return ScalarTimesI{s.f.derivative(n)}; },
                            [&](const Pair& p) -> Repr { return Pair{p.f1.derivative(n), p.f2.derivative(n)}; },
                            [&](const HPolynomial& h) -> Repr {
                                std::vector<Quaternion> d;
                                for (std::size_t k = n; k < h.coeffs.size(); ++k) {
                                    double factor = 1.0;
                                    for (std::size_t j = k - n + 1; j <= k; ++j) {
                                        factor *= static_cast<double>(j);
                                    }
                                    d.push_back(factor * h.coeffs[k]);
                                }
                                return HPolynomial{std::move(d)};
                            },
                            [&](const GeneralMat2& g) -> Repr { return GeneralMat2{g.F.derivative(n)}; },
                        },
                        repr_);
    return StemFunction(std::move(r), domain_);
}

MatrixFunction StemFunction::as_matrix_function() const {
    return std::visit(overloaded{
                          [](const ScalarTimesI& s) { return MatrixFunction::scalar(s.f); },
                          [](const Pair& p) {
                              return MatrixFunction(p.f1, p.f2, Complex(-1.0) * AnalyticScalar::reflected(p.f2),
                                                    AnalyticScalar::reflected(p.f1));
                          },
                          [](const HPolynomial& h) {
                              std::vector<Complex> a, b, c, d;
                              for (const Quaternion& q : h.coeffs) {
                                  const Mat2 m = q.matrix();
                                  a.push_back(m.a11);
                                  b.push_back(m.a12);
                                  c.push_back(m.a21);
                                  d.push_back(m.a22);
                              }
                              return MatrixFunction(AnalyticScalar::polynomial(a), AnalyticScalar::polynomial(b),
                                                    AnalyticScalar::polynomial(c), AnalyticScalar::polynomial(d));
                          },
                          [](const GeneralMat2& g) { return g.F; },
                      },
                      repr_);
}

StemFunction operator*(const StemFunction& F, const AnalyticScalar& f) {
    if (!f.is_symmetric()) {
        throw ContractViolation("stem functions form a module over symmetric scalars only");
    }
    using SF = StemFunction;
    if (const auto* s = std::get_if<SF::ScalarTimesI>(&F.repr_)) {
        return SF(SF::ScalarTimesI{s->f * f}, F.domain_);
    }
    if (const auto* p = std::get_if<SF::Pair>(&F.repr_)) {
        return SF(SF::Pair{p->f1 * f, p->f2 * f}, F.domain_);
    }
    return SF(SF::GeneralMat2{F.as_matrix_function() * f}, F.domain_);
}

// ---------------------------------------------------------------- split / calculus

StemSplit stem_split(const StemFunction& F) {
    StemSplit split;
    split.first = [F](Complex z) { return Quaternion::project(F(z)); };
    split.second = [F](Complex z) { return split_h_ih(F(z)).second; };
    return split;
}

StemSplit stem_split(const MatrixFunction& F, const SymmetricDomain& domain) {
    return stem_split(StemFunction::general(F, domain));
}

Mat2 eval_spectral(const std::function<Mat2(Complex)>& F, const Quaternion& q) {
    const SpectrumPair sp = spectrum(q);
    if (sp.real) {
        return F(sp.s_plus);
    }
    const SpectralProjections E = spectral_projections(sp);
    return F(sp.s_plus) * E.plus + F(sp.s_minus) * E.minus;
}

namespace {

void require_spectrum_in(const SymmetricDomain& domain, const Quaternion& q) {
    if (domain.is_whole_plane()) {
        return;
    }
    const SpectrumPair sp = spectrum(q);
    if (!domain.contains(sp.s_plus) || !domain.contains(sp.s_minus)) {
        throw DomainError("spectrum of q lies outside the function's domain");
    }
}

}  // namespace

Mat2 eval_spectral(const StemFunction& F, const Quaternion& q) {
    require_spectrum_in(F.domain(), q);
    return eval_spectral([&F](Complex z) { return F(z); }, q);
}

Mat2 eval_spectral(const MatrixFunction& F, const Quaternion& q, const SymmetricDomain& domain) {
    require_spectrum_in(domain, q);
    return eval_spectral([&F](Complex z) { return F(z); }, q);
}

Quaternion eval_quaternion(const StemFunction& F, const Quaternion& q) {
    return Quaternion::project(eval_spectral(F, q));
}

Quaternion hpoly_eval(const std::vector<Quaternion>& coeffs, const Quaternion& q) {
    Quaternion acc;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc * q + *it;
    }
    return acc;
}

bool zero_set_contains(const StemFunction& F, const Quaternion& q, double tol) {
    require_spectrum_in(F.domain(), q);
    const SpectrumPair sp = spectrum(q);
    return F(sp.s_plus).max_abs() <= tol && F(sp.s_minus).max_abs() <= tol;
}

}  // namespace qcalc
