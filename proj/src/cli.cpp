#include "qcalc/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include "qcalc/contour.hpp"
#include "qcalc/errors.hpp"
#include "qcalc/joint_op.hpp"
#include "qcalc/real_op.hpp"
#include "qcalc/slice.hpp"
#include "qcalc/spectrum.hpp"
#include "qcalc/stem.hpp"

namespace qcalc::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
    std::string command;
    std::string input = "-";
    std::string output = "-";
    std::optional<double> tol;
    std::optional<int> nodes;
    std::optional<double> fd_step;
    std::optional<int> grid_res;
    std::optional<double> margin;
    std::optional<std::string> emit_samples;
};

// ---------------------------------------------------------------- parsing

Complex parse_complex(const Json& j) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_object() && j.contains("re")) {
        return {j.at("re").get<double>(), j.value("im", 0.0)};
    }
    throw InvalidArgument("expected a number or {\"re\", \"im\"} record, got " + j.dump());
}

Quaternion parse_quaternion(const Json& j) {
    if (j.is_array() && j.size() == 4) {
        return Quaternion::from_components(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                                           j[3].get<double>());
    }
    if (j.is_object() && j.contains("z1")) {
        return Quaternion(parse_complex(j.at("z1")), parse_complex(j.at("z2")));
    }
    throw InvalidArgument("expected a quaternion [x0, x1, x2, x3] or {\"z1\", \"z2\"}, got " + j.dump());
}

AnalyticScalar parse_scalar(const Json& j) {
    if (j.is_number() || (j.is_object() && j.contains("re"))) {
        return AnalyticScalar::constant(parse_complex(j));
    }
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "z" || s == "identity") return AnalyticScalar::identity();
        if (s == "exp") return AnalyticScalar::exp();
        if (s == "sin") return AnalyticScalar::sin();
        if (s == "cos") return AnalyticScalar::cos();
        throw InvalidArgument("unknown function name '" + s + "'");
    }
    if (j.is_object() && j.size() == 1) {
        const auto& [key, body] = *j.items().begin();
        if (key == "poly") {
            std::vector<Complex> c;
            for (const Json& x : body) {
                c.push_back(parse_complex(x));
            }
            return AnalyticScalar::polynomial(std::move(c));
        }
        if (key == "affine") {
            return AnalyticScalar::affine(parse_complex(body.value("scale", Json(1.0))),
                                          parse_complex(body.value("shift", Json(0.0))), parse_scalar(body.at("f")));
        }
        if (key == "sum" || key == "product") {
            if (!body.is_array() || body.empty()) {
                throw InvalidArgument("'" + key + "' needs a nonempty list");
            }
            AnalyticScalar acc = parse_scalar(body[0]);
            for (std::size_t k = 1; k < body.size(); ++k) {
                acc = key == "sum" ? acc + parse_scalar(body[k]) : acc * parse_scalar(body[k]);
            }
            return acc;
        }
        if (key == "derivative") {
            return parse_scalar(body.at("f")).derivative(body.value("n", 1U));
        }
    }
    throw InvalidArgument("cannot read a scalar function from " + j.dump());
}

SymmetricDomain parse_domain(const Json& doc) {
    if (!doc.contains("domain") || doc.at("domain").is_null() || doc.at("domain") == "plane") {
        return {};
    }
    std::vector<Disk> disks;
    for (const Json& d : doc.at("domain")) {
        disks.push_back(Disk{parse_complex(d.at("center")), d.at("radius").get<double>()});
    }
    return SymmetricDomain(disks);
}

MatrixFunction parse_matrix_function(const Json& j) {
    if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2) {
        throw InvalidArgument("matrix function must be [[f11, f12], [f21, f22]]");
    }
    return MatrixFunction(parse_scalar(j[0][0]), parse_scalar(j[0][1]), parse_scalar(j[1][0]),
                          parse_scalar(j[1][1]));
}

StemFunction parse_stem(const Json& j, const SymmetricDomain& domain) {
    if (!j.is_object() || j.size() != 1) {
        throw InvalidArgument("stem must be one of {scalar|pair|hpoly|matrix: ...}");
    }
    const auto& [key, body] = *j.items().begin();
    if (key == "scalar") {
        return StemFunction::scalar(parse_scalar(body), domain);
    }
    if (key == "pair") {
        return StemFunction::pair(parse_scalar(body.at(0)), parse_scalar(body.at(1)), domain);
    }
    if (key == "hpoly") {
        std::vector<Quaternion> coeffs;
        for (const Json& c : body) {
            coeffs.push_back(parse_quaternion(c));
        }
        return StemFunction::hpolynomial(std::move(coeffs));
    }
    if (key == "matrix") {
        return StemFunction::general(parse_matrix_function(body), domain);
    }
    throw InvalidArgument("unknown stem kind '" + key + "'");
}

RealMatrix parse_real_matrix(const Json& j) {
    if (!j.is_array() || j.empty()) {
        throw InvalidArgument("matrix must be a nonempty list of rows");
    }
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].size();
    RealMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j[r].size() != cols) {
            throw InvalidArgument("ragged matrix rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(r, c) = j[r][c].get<double>();
        }
    }
    return m;
}

CVec2 parse_cvec2(const Json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw InvalidArgument("point of C^2 must be a two-element list");
    }
    return {parse_complex(j[0]), parse_complex(j[1])};
}

// ---------------------------------------------------------------- output

Json to_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const Mat2& m) {
    return Json::array({Json::array({to_json(m.a11), to_json(m.a12)}), Json::array({to_json(m.a21), to_json(m.a22)})});
}

Json to_json(const Quaternion& q) {
    const auto c = q.components();
    return Json::array({c[0], c[1], c[2], c[3]});
}

Json to_json(const CVec2& v) { return Json::array({to_json(v.z1), to_json(v.z2)}); }

Json to_json(const RealMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(row);
    }
    return rows;
}

Json to_json(const ComplexMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(to_json(Complex(m(r, c))));
        }
        rows.push_back(row);
    }
    return rows;
}

Json to_json(const QuadratureDiagnostics& d) {
    return Json{{"nodes_per_circle", d.nodes_per_circle},
                {"estimated_error", d.estimated_error},
                {"converged", d.converged},
                {"accuracy_warning", !d.converged}};
}

Json to_json(const Contour& gamma) {
    Json circles = Json::array();
    for (const Circle& c : gamma.circles) {
        circles.push_back(Json{{"center", to_json(c.center)}, {"radius", c.radius}, {"orientation", c.orientation}});
    }
    return Json{{"circles", circles}, {"conjugate_symmetric", gamma.conjugate_symmetric}};
}

Json circle_samples(const Contour& gamma, const std::function<Json(Complex)>& value, int per_circle = 64) {
    Json out = Json::array();
    for (const Circle& c : gamma.circles) {
        for (int k = 0; k < per_circle; ++k) {
            const Complex z = c.center + c.radius * std::polar(1.0, 2.0 * std::numbers::pi * k / per_circle);
            out.push_back(Json{{"zeta", to_json(z)}, {"value", value(z)}});
        }
    }
    return out;
}

// ---------------------------------------------------------------- commands

struct Context {
    const Json& doc;
    const Options& opt;
    Json result = Json::object();
    Json diagnostics = Json::object();
    Json samples = Json::array();

    QuadratureConfig quadrature() const {
        QuadratureConfig cfg;
        cfg.nodes_per_circle = opt.nodes.value_or(doc.value("nodes", cfg.nodes_per_circle));
        cfg.rel_tol = opt.tol.value_or(doc.value("tol", cfg.rel_tol));
        cfg.max_nodes = std::max(doc.value("max_nodes", cfg.max_nodes), cfg.nodes_per_circle);
        return cfg;
    }
    double margin(double fallback) const { return opt.margin.value_or(doc.value("margin", fallback)); }
    double tol(double fallback) const { return opt.tol.value_or(doc.value("tol", fallback)); }
};

Json spectrum_json(const Quaternion& q) {
    const SpectrumPair sp = spectrum(q);
    const AxialForm ax = axial_decompose(q);
    return Json{{"s_plus", to_json(sp.s_plus)},
                {"s_minus", to_json(sp.s_minus)},
                {"nu_plus", to_json(sp.nu_plus)},
                {"nu_minus", to_json(sp.nu_minus)},
                {"real", sp.real},
                {"norm", q.norm()},
                {"axial", Json{{"x", ax.x}, {"y", ax.y}, {"s", to_json(ax.s)}}}};
}

void cmd_spectrum(Context& c) { c.result = spectrum_json(parse_quaternion(c.doc.at("q"))); }

void cmd_eval(Context& c) {
    const SymmetricDomain domain = parse_domain(c.doc);
    const StemFunction F = parse_stem(c.doc.at("stem"), domain);
    const Quaternion q = parse_quaternion(c.doc.at("q"));
    const std::string method = c.doc.value("method", "both");
    if (method != "both" && method != "spectral" && method != "contour") {
        throw InvalidArgument("method must be spectral, contour or both");
    }
    std::optional<Mat2> spectral;
    if (method != "contour") {
        spectral = eval_spectral(F, q);
        c.result["spectral"] = Json{{"quaternion", to_json(Quaternion::project(*spectral))},
                                    {"matrix", to_json(*spectral)},
                                    {"dist_to_h", dist_to_h(*spectral)}};
    }
    if (method != "spectral") {
        const Contour gamma = contour_for(q, domain, c.margin(0.25));
        const ContourResult r = cauchy_transform(F, q, gamma, c.quadrature());
        c.result["contour"] = Json{{"quaternion", to_json(Quaternion::project(r.value))},
                                   {"matrix", to_json(r.value)},
                                   {"dist_to_h", dist_to_h(r.value)}};
        c.diagnostics["quadrature"] = to_json(r.diagnostics);
        c.diagnostics["contour"] = to_json(gamma);
        if (spectral) {
            c.diagnostics["spectral_contour_difference"] = (r.value - *spectral).frobenius_norm();
        }
        if (c.opt.emit_samples) {
            c.samples = circle_samples(gamma, [&F](Complex z) { return to_json(F(z)); });
        }
    }
}

void cmd_deriv(Context& c) {
    const SymmetricDomain domain = parse_domain(c.doc);
    const StemFunction F = parse_stem(c.doc.at("stem"), domain);
    const Quaternion q = parse_quaternion(c.doc.at("q"));
    const unsigned n = c.doc.value("n", 1U);
    const Mat2 spectral = eval_spectral(F.derivative(n), q);
    const Contour gamma = contour_for(q, domain, c.margin(0.25));
    const ContourResult r = cauchy_derivative(F, n, q, gamma, c.quadrature());
    c.result["n"] = n;
    c.result["spectral"] = Json{{"quaternion", to_json(Quaternion::project(spectral))}, {"matrix", to_json(spectral)}};
    c.result["contour"] = Json{{"quaternion", to_json(Quaternion::project(r.value))}, {"matrix", to_json(r.value)}};
    c.diagnostics["quadrature"] = to_json(r.diagnostics);
    c.diagnostics["contour"] = to_json(gamma);
    c.diagnostics["spectral_contour_difference"] = (r.value - spectral).frobenius_norm();
}

void cmd_stem_check(Context& c) {
    const SymmetricDomain domain = parse_domain(c.doc);
    MatrixFunction F;
    if (c.doc.contains("matrix")) {
        F = parse_matrix_function(c.doc.at("matrix"));
    } else {
        F = parse_stem(c.doc.at("stem"), domain).as_matrix_function();
    }
    const std::vector<Complex> samples = stem_validation_samples(domain);
    const StemReport rep = verify_stem(F, samples, c.tol(1e-10));
    c.result = Json{{"pass", rep.pass}, {"max_defect", rep.max_defect}, {"witness", to_json(rep.witness)}};
    c.diagnostics["samples"] = samples.size();
    if (c.opt.emit_samples) {
        for (const Complex& z : samples) {
            c.samples.push_back(Json{{"zeta", to_json(z)},
                                     {"defect", (F(std::conj(z)) - skew_conjugate(F(z))).frobenius_norm()}});
        }
    }
}

void cmd_slice_check(Context& c) {
    const SymmetricDomain domain = parse_domain(c.doc);
    QuaternionMap G;
    if (c.doc.contains("map")) {
        const std::string m = c.doc.at("map").get<std::string>();
        if (m == "star") {
            G = [](const Quaternion& q) { return q.star().matrix(); };
        } else if (m == "square") {
            G = [](const Quaternion& q) { return (q * q).matrix(); };
        } else {
            throw InvalidArgument("unknown map '" + m + "' (star, square)");
        }
    } else {
        const StemFunction F = parse_stem(c.doc.at("stem"), domain);
        G = [F](const Quaternion& q) { return eval_spectral(F, q); };
    }
    const double h = c.opt.fd_step.value_or(c.doc.value("fd_step", 1e-4));
    SliceSampleGrid grid;
    if (c.doc.contains("points")) {
        grid.h = h;
        for (const Json& p : c.doc.at("points")) {
            grid.points.push_back(SlicePoint{p.at("x").get<double>(), p.at("y").get<double>(),
                                             parse_quaternion(p.at("s"))});
        }
    } else {
        grid = SliceSampleGrid::random(domain, c.opt.grid_res.value_or(c.doc.value("count", 64)),
                                       c.doc.value("seed", 1ULL), h);
    }
    const SliceReport rep = slice_regularity_report(G, grid, c.tol(1e-5), domain);
    c.result = Json{{"pass", rep.pass},
                    {"max_defect", rep.max_defect},
                    {"worst_point", Json{{"x", rep.worst_point.x},
                                         {"y", rep.worst_point.y},
                                         {"s", to_json(rep.worst_point.s)}}}};
    c.diagnostics["points"] = grid.points.size();
    c.diagnostics["fd_step"] = grid.h;
    if (c.opt.emit_samples) {
        for (const SlicePoint& p : grid.points) {
            c.samples.push_back(Json{{"x", p.x},
                                     {"y", p.y},
                                     {"s", to_json(p.s)},
                                     {"defect", dbar_s(G, p.x, p.y, p.s, grid.h, domain).frobenius_norm()}});
        }
    }
}

void cmd_zeros(Context& c) {
    const SymmetricDomain domain = parse_domain(c.doc);
    const StemFunction F = parse_stem(c.doc.at("stem"), domain);
    std::vector<Quaternion> qs;
    if (c.doc.contains("qs")) {
        for (const Json& q : c.doc.at("qs")) {
            qs.push_back(parse_quaternion(q));
        }
    } else {
        qs.push_back(parse_quaternion(c.doc.at("q")));
    }
    const double tol = c.tol(1e-10);
    Json out = Json::array();
    for (const Quaternion& q : qs) {
        const SpectrumPair sp = spectrum(q);
        out.push_back(Json{{"q", to_json(q)},
                           {"in_zero_set", zero_set_contains(F, q, tol)},
                           {"abs_F_s_plus", F(sp.s_plus).max_abs()},
                           {"abs_F_s_minus", F(sp.s_minus).max_abs()}});
    }
    c.result["points"] = out;
}

Json spectrum_report_json(const SpectrumReport& rep) {
    Json cs = Json::array();
    for (Complex l : rep.complex_spectrum) {
        cs.push_back(to_json(l));
    }
    Json qs = Json::array();
    for (Complex l : rep.q_spectrum_descriptor) {
        qs.push_back(to_json(l));
    }
    return Json{{"complex_spectrum", cs}, {"q_spectrum_descriptor", qs}};
}

void cmd_op_spectrum(Context& c) {
    const RealOperator T(parse_real_matrix(c.doc.at("T")));
    const SpectrumReport rep = complex_spectrum(T);
    c.result = spectrum_report_json(rep);
    if (c.doc.contains("qs") || c.doc.contains("q")) {
        std::vector<Quaternion> qs;
        if (c.doc.contains("qs")) {
            for (const Json& q : c.doc.at("qs")) {
                qs.push_back(parse_quaternion(q));
            }
        } else {
            qs.push_back(parse_quaternion(c.doc.at("q")));
        }
        Json margins = Json::array();
        for (const Quaternion& q : qs) {
            const QBlockMargins b = q_block_margins(T, q);
            margins.push_back(Json{{"q", to_json(q)},
                                   {"margin", q_resolvent_margin(T, q)},
                                   {"block_direct", b.direct},
                                   {"block_star", b.star},
                                   {"in_q_spectrum", rep.q_spectrum_contains(q)}});
        }
        c.result["margins"] = margins;
    }
}

void cmd_op_calc(Context& c) {
    const RealOperator T(parse_real_matrix(c.doc.at("T")));
    OperatorStem F(T.n());
    if (c.doc.contains("f")) {
        F = OperatorStem::scalar(parse_scalar(c.doc.at("f")), T.n());
    } else if (c.doc.contains("poly")) {
        std::vector<RealMatrix> coeffs;
        for (const Json& a : c.doc.at("poly")) {
            coeffs.push_back(parse_real_matrix(a));
        }
        F = OperatorStem::polynomial(coeffs);
    } else if (c.doc.contains("terms")) {
        for (const Json& t : c.doc.at("terms")) {
            F.add_term(parse_real_matrix(t.at("A")), parse_scalar(t.at("f")));
        }
    } else {
        throw InvalidArgument("op-calc needs one of f, poly, terms");
    }
    const OpCalcResult r = op_calculus_complex(F, T, c.quadrature());
    const double flat_tol = c.doc.value("flat_tol", 1e-8);
    c.diagnostics["flat_defect"] = r.flat_defect;
    c.diagnostics["scale"] = r.scale;
    c.diagnostics["quadrature"] = to_json(r.diagnostics);
    c.diagnostics["contour"] = to_json(r.contour);
    if (!(r.flat_defect <= flat_tol * r.scale)) {
        throw ContractViolation("F(T_C) is not flat-invariant (defect " + std::to_string(r.flat_defect) + ")");
    }
    c.result["F_of_T"] = to_json(RealMatrix(r.value.real()));
    if (c.opt.emit_samples) {
        c.samples = circle_samples(r.contour, [&F](Complex z) { return to_json(F(z)); }, 32);
    }
}

void cmd_mult_op(Context& c) {
    std::vector<Quaternion> theta;
    for (const Json& q : c.doc.at("theta")) {
        theta.push_back(parse_quaternion(q));
    }
    const RealOperator T = discrete_mult_op(theta);
    c.result["operator"] = to_json(T.matrix());
    c.result["spectrum"] = spectrum_report_json(complex_spectrum(T));
    Json per_point = Json::array();
    for (const Quaternion& q : theta) {
        const SpectrumPair sp = spectrum(q);
        per_point.push_back(Json{{"theta", to_json(q)}, {"roots", Json::array({to_json(sp.s_plus), to_json(sp.s_minus)})}});
    }
    c.result["per_point"] = per_point;
}

CommutingPair parse_pair(const Json& doc) {
    return CommutingPair(RealOperator(parse_real_matrix(doc.at("T1"))), RealOperator(parse_real_matrix(doc.at("T2"))));
}

void cmd_joint_spectrum(Context& c) {
    const CommutingPair P = parse_pair(c.doc);
    Json pts = Json::array();
    for (const CVec2& p : joint_spectrum_points(P, c.doc.value("seed", 0x6a09e667f3bcc908ULL))) {
        pts.push_back(Json{{"point", to_json(p)}, {"margin", joint_resolvent_margin(P, p)}});
    }
    c.result["points"] = pts;
    c.result["q_matrix"] = to_json(pair_q_matrix(P).matrix());
    if (c.doc.contains("z")) {
        const CVec2 z = parse_cvec2(c.doc.at("z"));
        const PairBlockMargins b = pair_block_margins(P, z);
        c.result["query"] = Json{{"z", to_json(z)},
                                 {"margin", joint_resolvent_margin(P, z)},
                                 {"block_direct", b.direct},
                                 {"block_cofactor", b.cofactor},
                                 {"block_star", b.star}};
    }
}

Analytic2 parse_analytic2(const Json& j) {
    Analytic2 f = Analytic2::constant(0.0);
    for (const Json& m : j.value("monomials", Json::array())) {
        f = f + Analytic2::monomial(m.value("a", 0U), m.value("b", 0U), parse_complex(m.value("c", Json(1.0))));
    }
    for (const Json& p : j.value("products", Json::array())) {
        f = f + Analytic2::separable(parse_scalar(p.at("f")), parse_scalar(p.at("g")),
                                     parse_complex(p.value("c", Json(1.0))));
    }
    return f;
}

void cmd_joint_calc(Context& c) {
    const CommutingPair P = parse_pair(c.doc);
    const Analytic2 f = parse_analytic2(c.doc.at("f"));
    SphereGrid grid = SphereGrid::enclosing(P, c.opt.grid_res.value_or(c.doc.value("resolution", 48)));
    if (c.doc.contains("center")) {
        grid.c1 = c.doc.at("center").at(0).get<double>();
        grid.c2 = c.doc.at("center").at(1).get<double>();
    }
    grid.radius = c.doc.value("radius", grid.radius);
    const MartinelliResult r = martinelli_complex(f, P, grid);
    const double tol = c.tol(1e-8);
    c.diagnostics["imag_residue"] = r.imag_residue;
    c.diagnostics["scale"] = r.scale;
    c.diagnostics["nodes"] = r.nodes;
    c.diagnostics["grid"] = Json{{"center", Json::array({grid.c1, grid.c2})},
                                 {"radius", grid.radius},
                                 {"resolution", grid.resolution}};
    if (!(r.imag_residue <= tol * r.scale)) {
        throw AccuracyError("Martinelli integral has an imaginary residue of " + std::to_string(r.imag_residue),
                            r.imag_residue);
    }
    c.result["f_of_T"] = to_json(RealMatrix(r.value.real()));
}

using Handler = void (*)(Context&);

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table{
        {"spectrum", cmd_spectrum},     {"eval", cmd_eval},
        {"deriv", cmd_deriv},           {"stem-check", cmd_stem_check},
        {"slice-check", cmd_slice_check}, {"zeros", cmd_zeros},
        {"op-spectrum", cmd_op_spectrum}, {"op-calc", cmd_op_calc},
        {"mult-op", cmd_mult_op},       {"joint-spectrum", cmd_joint_spectrum},
        {"joint-calc", cmd_joint_calc},
    };
    return table;
}

Json options_json(const Options& o) {
    Json j = Json::object();
    if (o.tol) j["tol"] = *o.tol;
    if (o.nodes) j["nodes"] = *o.nodes;
    if (o.fd_step) j["fd_step"] = *o.fd_step;
    if (o.grid_res) j["grid_res"] = *o.grid_res;
    if (o.margin) j["margin"] = *o.margin;
    return j;
}

void write_document(const Json& doc, const std::string& path, std::ostream& out) {
    if (path == "-") {
        out << doc.dump(2) << '\n';
        return;
    }
    std::ofstream f(path);
    if (!f) {
        throw InvalidArgument("cannot open output file " + path);
    }
    f << doc.dump(2) << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Quaternionic functional calculus toolkit"};
    std::vector<std::string> names;
    for (const auto& [name, _] : handlers()) {
        names.push_back(name);
    }
    app.add_option("command", opt.command, "Subcommand")->required()->check(CLI::IsMember(names));
    app.add_option("-i,--input", opt.input, "Input document (JSON), '-' for stdin");
    app.add_option("-o,--output", opt.output, "Output document, '-' for stdout");
    app.add_option("--tol", opt.tol, "Tolerance (quadrature rel_tol or pass threshold)");
    app.add_option("--nodes", opt.nodes, "Initial trapezoid nodes per circle");
    app.add_option("--fd-step", opt.fd_step, "Finite-difference step for slice checks");
    app.add_option("--grid-res", opt.grid_res, "Sphere resolution (joint-calc) or slice grid size");
    app.add_option("--margin", opt.margin, "Contour clearance around spectra");
    app.add_option("--emit-samples", opt.emit_samples, "Write evaluation samples to this file");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream help;
        const int code = app.exit(e, help, help);
        (code == 0 ? out : err) << help.str();
        return code == 0 ? kOk : kParseError;
    }

    Json doc;
    Json report{{"command", opt.command}};
    auto fail = [&](const char* kind, const std::string& what, int code) {
        err << "qcalc " << opt.command << ": " << kind << ": " << what << '\n';
        report["error"] = Json{{"type", kind}, {"message", what}};
        try {
            write_document(report, opt.output, out);
        } catch (const std::exception&) {
        }
        return code;
    };
    try {
        if (opt.input == "-") {
            doc = Json::parse(in);
        } else {
            std::ifstream f(opt.input);
            if (!f) {
                return fail("parse", "cannot open input file " + opt.input, kParseError);
            }
            doc = Json::parse(f);
        }
    } catch (const nlohmann::json::exception& e) {
        return fail("parse", e.what(), kParseError);
    }

    report["input"] = doc;
    report["options"] = options_json(opt);
    Context ctx{doc, opt};
    try {
        handlers().at(opt.command)(ctx);
    } catch (const nlohmann::json::exception& e) {
        return fail("parse", e.what(), kParseError);
    } catch (const InvalidArgument& e) {
        return fail("invalid_argument", e.what(), kParseError);
    } catch (const DomainError& e) {
        return fail("domain", e.what(), kDomainError);
    } catch (const GeometryError& e) {
        return fail("geometry", e.what(), kDomainError);
    } catch (const ContractViolation& e) {
        return fail("contract", e.what(), kDomainError);
    } catch (const SingularElement& e) {
        return fail("singular", e.what(), kDomainError);
    } catch (const AccuracyError& e) {
        report["diagnostics"] = ctx.diagnostics;
        report["diagnostics"]["measured"] = e.measured();
        return fail("accuracy", e.what(), kAccuracyError);
    } catch (const NumericError& e) {
        return fail("numeric", e.what(), kAccuracyError);
    }
    report["result"] = ctx.result;
    report["diagnostics"] = ctx.diagnostics;
    try {
        if (opt.emit_samples) {
            std::ofstream f(*opt.emit_samples);
            if (!f) {
                return fail("invalid_argument", "cannot open samples file " + *opt.emit_samples, kParseError);
            }
            f << Json{{"command", opt.command}, {"samples", ctx.samples}}.dump(2) << '\n';
        }
        write_document(report, opt.output, out);
    } catch (const InvalidArgument& e) {
        return fail("invalid_argument", e.what(), kParseError);
    }
    return kOk;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cin, std::cout, std::cerr);
}

}  // namespace qcalc::cli
