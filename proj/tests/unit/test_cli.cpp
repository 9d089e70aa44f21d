#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "qcalc/cli.hpp"

namespace {

using Json = nlohmann::json;

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
    Json doc() const { return Json::parse(out); }
};

Outcome call_raw(const std::vector<std::string>& args, const std::string& input) {
    std::istringstream in(input);
    std::ostringstream out;
    std::ostringstream err;
    Outcome o;
    o.code = qcalc::cli::run(args, in, out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

Outcome call(const std::string& command, const Json& input, std::vector<std::string> extra = {}) {
    extra.insert(extra.begin(), command);
    return call_raw(extra, input.dump());
}

double re(const Json& z) { return z.at("re").get<double>(); }
double im(const Json& z) { return z.at("im").get<double>(); }

std::string tmp_path(const std::string& name) { return std::string("/tmp/qcalc_cli_test_") + name; }

}  // namespace

TEST_CASE("cli spectrum of J") {
    const Outcome o = call("spectrum", Json{{"q", {0, 1, 0, 0}}});
    REQUIRE(o.code == 0);
    const Json d = o.doc();
    CHECK(d["command"] == "spectrum");
    CHECK(re(d["result"]["s_plus"]) == doctest::Approx(0.0));
    CHECK(im(d["result"]["s_plus"]) == doctest::Approx(1.0));
    CHECK(im(d["result"]["s_minus"]) == doctest::Approx(-1.0));
    CHECK(d["result"]["norm"].get<double>() == doctest::Approx(1.0));
    CHECK(d["input"]["q"] == Json({0, 1, 0, 0}));
}

TEST_CASE("cli spectrum accepts the z1/z2 form") {
    const Outcome o = call("spectrum", Json{{"q", {{"z1", {{"re", 0.0}, {"im", 0.0}}}, {"z2", 1.0}}}});
    REQUIRE(o.code == 0);
    const Json r = o.doc()["result"];
    CHECK(im(r["s_plus"]) == doctest::Approx(1.0));
    CHECK(r["real"] == false);
}

TEST_CASE("cli op-spectrum of a rotation block") {
    const Outcome o = call("op-spectrum", Json{{"T", {{1, 2}, {-2, 1}}}});
    REQUIRE(o.code == 0);
    const Json cs = o.doc()["result"]["complex_spectrum"];
    REQUIRE(cs.size() == 2);
    CHECK(re(cs[0]) == doctest::Approx(1.0));
    CHECK(re(cs[1]) == doctest::Approx(1.0));
    CHECK(std::abs(im(cs[0])) == doctest::Approx(2.0));
    CHECK(im(cs[0]) == doctest::Approx(-im(cs[1])));
}

TEST_CASE("cli op-spectrum margins") {
    const Json in{{"T", {{1, 2}, {-2, 1}}}, {"qs", {{1, 2, 0, 0}, {1, 0, 2, 0}, {0, 0, 0, 0}}}};
    const Outcome o = call("op-spectrum", in);
    REQUIRE(o.code == 0);
    const Json m = o.doc()["result"]["margins"];
    REQUIRE(m.size() == 3);
    CHECK(m[0]["margin"].get<double>() < 1e-12);
    CHECK(m[0]["in_q_spectrum"] == true);
    CHECK(m[1]["margin"].get<double>() < 1e-12);
    CHECK(m[1]["in_q_spectrum"] == true);
    CHECK(m[2]["margin"].get<double>() > 0.1);
    CHECK(m[2]["in_q_spectrum"] == false);
}

TEST_CASE("cli eval of exp at J") {
    const Outcome o = call("eval", Json{{"stem", {{"scalar", "exp"}}}, {"q", {0, 1, 0, 0}}});
    REQUIRE(o.code == 0);
    const Json d = o.doc();
    for (const char* method : {"spectral", "contour"}) {
        const Json q = d["result"][method]["quaternion"];
        CHECK(q[0].get<double>() == doctest::Approx(std::cos(1.0)).epsilon(1e-12));
        CHECK(q[1].get<double>() == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
        CHECK(std::abs(q[2].get<double>()) < 1e-12);
        CHECK(std::abs(q[3].get<double>()) < 1e-12);
        CHECK(d["result"][method]["dist_to_h"].get<double>() < 1e-12);
    }
    CHECK(d["diagnostics"]["spectral_contour_difference"].get<double>() < 1e-10);
    CHECK(d["diagnostics"]["quadrature"]["converged"] == true);
    CHECK(d["diagnostics"]["quadrature"]["nodes_per_circle"].get<int>() > 0);
}

TEST_CASE("cli eval rejects a non-stem") {
    const Json f{{"poly", {{{"re", 0.0}, {"im", 1.0}}, 1}}};
    const Json in{{"stem", {{"matrix", {{f, 0}, {0, f}}}}}, {"q", {0, 0, 1, 0}}, {"method", "spectral"}};
    const Outcome o = call("eval", in);
    CHECK(o.code == 2);
    CHECK(o.doc()["error"]["type"] == "contract");
}

TEST_CASE("cli eval of an H-polynomial") {
    // q^2 for q = J + K is -2
    const Json in{{"stem", {{"hpoly", {{0, 0, 0, 0}, {0, 0, 0, 0}, {1, 0, 0, 0}}}}}, {"q", {0, 1, 1, 0}}};
    const Outcome o = call("eval", in);
    REQUIRE(o.code == 0);
    const Json q = o.doc()["result"]["contour"]["quaternion"];
    CHECK(q[0].get<double>() == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(std::abs(q[1].get<double>()) < 1e-10);
}

TEST_CASE("cli deriv of exp") {
    const Json in{{"stem", {{"scalar", "exp"}}}, {"q", {0.5, 0, 0, 1}}, {"n", 3}};
    const Outcome o = call("deriv", in);
    REQUIRE(o.code == 0);
    const Json d = o.doc();
    CHECK(d["result"]["n"] == 3);
    const Json a = d["result"]["spectral"]["quaternion"];
    const Json b = d["result"]["contour"]["quaternion"];
    for (int k = 0; k < 4; ++k) {
        CHECK(a[k].get<double>() == doctest::Approx(b[k].get<double>()).epsilon(1e-9));
    }
    CHECK(a[0].get<double>() == doctest::Approx(std::exp(0.5) * std::cos(1.0)));
    CHECK(d["diagnostics"]["spectral_contour_difference"].get<double>() < 1e-9);
}

TEST_CASE("cli stem-check") {
    SUBCASE("scalar stem passes") {
        const Outcome o = call("stem-check", Json{{"stem", {{"scalar", "sin"}}}});
        REQUIRE(o.code == 0);
        CHECK(o.doc()["result"]["pass"] == true);
        CHECK(o.doc()["result"]["max_defect"].get<double>() < 1e-12);
    }
    SUBCASE("(zeta + i) I fails with defect 2 sqrt 2") {
        const Json f{{"poly", {{{"re", 0.0}, {"im", 1.0}}, 1}}};
        const Outcome o = call("stem-check", Json{{"matrix", {{f, 0}, {0, f}}}});
        REQUIRE(o.code == 0);
        CHECK(o.doc()["result"]["pass"] == false);
        CHECK(o.doc()["result"]["max_defect"].get<double>() == doctest::Approx(2.0 * std::numbers::sqrt2));
    }
}

TEST_CASE("cli slice-check") {
    SUBCASE("exp is regular") {
        const Outcome o = call("slice-check", Json{{"stem", {{"scalar", "exp"}}}, {"count", 20}, {"seed", 3}});
        REQUIRE(o.code == 0);
        CHECK(o.doc()["result"]["pass"] == true);
        CHECK(o.doc()["diagnostics"]["points"] == 20);
    }
    SUBCASE("q* has defect one") {
        const Json pts = Json::array({Json{{"x", 0.3}, {"y", 0.7}, {"s", {0, 0, 1, 0}}}});
        const Outcome o = call("slice-check", Json{{"map", "star"}, {"points", pts}});
        REQUIRE(o.code == 0);
        CHECK(o.doc()["result"]["pass"] == false);
        CHECK(o.doc()["result"]["max_defect"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
    }
    SUBCASE("unknown map") {
        CHECK(call("slice-check", Json{{"map", "cube"}}).code == 1);
    }
}

TEST_CASE("cli zeros") {
    const Json in{{"stem", {{"scalar", {{"poly", {1, 0, 1}}}}}}, {"qs", {{0, 1, 0, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}}}};
    const Outcome o = call("zeros", in);
    REQUIRE(o.code == 0);
    const Json p = o.doc()["result"]["points"];
    REQUIRE(p.size() == 3);
    CHECK(p[0]["in_zero_set"] == true);
    CHECK(p[1]["in_zero_set"] == true);
    CHECK(p[2]["in_zero_set"] == false);
}

TEST_CASE("cli op-calc") {
    SUBCASE("exp of a rotation block") {
        const Outcome o = call("op-calc", Json{{"T", {{1, 2}, {-2, 1}}}, {"f", "exp"}});
        REQUIRE(o.code == 0);
        const Json m = o.doc()["result"]["F_of_T"];
        const double e = std::exp(1.0);
        CHECK(m[0][0].get<double>() == doctest::Approx(e * std::cos(2.0)).epsilon(1e-10));
        CHECK(m[0][1].get<double>() == doctest::Approx(e * std::sin(2.0)).epsilon(1e-10));
        CHECK(m[1][0].get<double>() == doctest::Approx(-e * std::sin(2.0)).epsilon(1e-10));
    }
    SUBCASE("matrix polynomial") {
        const Json in{{"T", {{0, 1}, {0, 0}}}, {"poly", {{{1, 0}, {0, 1}}, {{2, 0}, {0, 2}}}}};
        const Outcome o = call("op-calc", in);
        REQUIRE(o.code == 0);
        const Json m = o.doc()["result"]["F_of_T"];
        CHECK(m[0][0].get<double>() == doctest::Approx(1.0));
        CHECK(m[0][1].get<double>() == doctest::Approx(2.0));
        CHECK(std::abs(m[1][0].get<double>()) < 1e-10);
    }
    SUBCASE("a non-real coefficient is a contract error") {
        const Json in{{"T", {{1, 0}, {0, 2}}}, {"f", {{"poly", {{{"re", 0.0}, {"im", 1.0}}}}}}};
        const Outcome o = call("op-calc", in);
        CHECK(o.code == 2);
        CHECK(o.doc()["error"]["type"] == "contract");
    }
    SUBCASE("missing function") {
        CHECK(call("op-calc", Json{{"T", {{1}}}}).code == 1);
    }
}

TEST_CASE("cli mult-op") {
    const Outcome o = call("mult-op", Json{{"theta", {{0, 1, 0, 0}, {0, 0, 2, 0}}}});
    REQUIRE(o.code == 0);
    const Json r = o.doc()["result"];
    CHECK(r["operator"].size() == 8);
    const Json cs = r["spectrum"]["complex_spectrum"];
    REQUIRE(cs.size() == 8);
    std::vector<double> mods;
    for (const Json& z : cs) {
        CHECK(std::abs(re(z)) < 1e-10);
        mods.push_back(std::abs(im(z)));
    }
    std::sort(mods.begin(), mods.end());
    CHECK(mods[0] == doctest::Approx(1.0));
    CHECK(mods[3] == doctest::Approx(1.0));
    CHECK(mods[4] == doctest::Approx(2.0));
    CHECK(mods[7] == doctest::Approx(2.0));
    CHECK(r["per_point"].size() == 2);
}

TEST_CASE("cli joint-spectrum") {
    const Json in{{"T1", {{1, 0}, {0, 2}}}, {"T2", {{3, 0}, {0, 4}}}, {"z", {1, 3}}};
    const Outcome o = call("joint-spectrum", in);
    REQUIRE(o.code == 0);
    const Json r = o.doc()["result"];
    REQUIRE(r["points"].size() == 2);
    CHECK(re(r["points"][0]["point"][0]) == doctest::Approx(1.0));
    CHECK(re(r["points"][0]["point"][1]) == doctest::Approx(3.0));
    CHECK(re(r["points"][1]["point"][0]) == doctest::Approx(2.0));
    CHECK(re(r["points"][1]["point"][1]) == doctest::Approx(4.0));
    CHECK(r["points"][0]["margin"].get<double>() < 1e-8);
    CHECK(r["query"]["margin"].get<double>() < 1e-12);
    CHECK(r["q_matrix"].size() == 4);
}

TEST_CASE("cli joint-spectrum rejects a non-commuting pair") {
    const Json in{{"T1", {{0, 1}, {0, 0}}}, {"T2", {{0, 0}, {1, 0}}}};
    const Outcome o = call("joint-spectrum", in);
    CHECK(o.code == 1);
    CHECK(o.doc()["error"]["type"] == "invalid_argument");
}

TEST_CASE("cli joint-calc") {
    const Json f{{"monomials", {{{"a", 1}, {"b", 1}}}}};
    const Json in{{"T1", {{1, 0}, {0, 2}}}, {"T2", {{-1, 0}, {0, 0.5}}}, {"f", f}, {"resolution", 32}};
    const Outcome o = call("joint-calc", in);
    REQUIRE(o.code == 0);
    const Json m = o.doc()["result"]["f_of_T"];
    CHECK(m[0][0].get<double>() == doctest::Approx(-1.0).epsilon(1e-4));
    CHECK(m[1][1].get<double>() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(m[0][1].get<double>()) < 1e-4);
    CHECK(o.doc()["diagnostics"]["grid"]["resolution"] == 32);
}

TEST_CASE("cli joint-calc geometry error") {
    const Json f{{"monomials", {{{"a", 0}, {"b", 0}}}}};
    const Json in{{"T1", {{5, 0}, {0, 2}}}, {"T2", {{0, 0}, {0, 0}}}, {"f", f}, {"center", {0, 0}}, {"radius", 1.0}};
    const Outcome o = call("joint-calc", in);
    CHECK(o.code == 2);
    CHECK(o.doc()["error"]["type"] == "geometry");
}

TEST_CASE("cli joint-calc accuracy error carries the measured residue") {
    // f = i z1 is not real on real points
    const Json f{{"monomials", {{{"a", 1}, {"b", 0}, {"c", {{"re", 0.0}, {"im", 1.0}}}}}}};
    const Json in{{"T1", {{1, 0}, {0, 2}}}, {"T2", {{0, 0}, {0, 0}}}, {"f", f}, {"resolution", 16}};
    const Outcome o = call("joint-calc", in);
    CHECK(o.code == 3);
    const Json d = o.doc();
    CHECK(d["error"]["type"] == "accuracy");
    CHECK(d["diagnostics"]["measured"].get<double>() > 1.0);
}

TEST_CASE("cli exit codes") {
    SUBCASE("unknown subcommand") { CHECK(call_raw({"frobnicate"}, "{}").code == 1); }
    SUBCASE("missing subcommand") { CHECK(call_raw({}, "{}").code == 1); }
    SUBCASE("malformed document") {
        const Outcome o = call_raw({"spectrum"}, "{\"q\": [0, 1,");
        CHECK(o.code == 1);
        CHECK_FALSE(o.err.empty());
        CHECK(o.doc()["error"]["type"] == "parse");
    }
    SUBCASE("missing field") { CHECK(call("spectrum", Json::object()).code == 1); }
    SUBCASE("bad quaternion") { CHECK(call("spectrum", Json{{"q", {1, 2, 3}}}).code == 1); }
    SUBCASE("unknown function") {
        CHECK(call("eval", Json{{"stem", {{"scalar", "tan"}}}, {"q", {0, 1, 0, 0}}}).code == 1);
    }
    SUBCASE("point outside the domain") {
        const Json dom = Json::array({Json{{"center", 0.0}, {"radius", 1.0}}});
        const Outcome o = call("eval", Json{{"stem", {{"scalar", "exp"}}}, {"q", {0, 3, 0, 0}}, {"domain", dom}});
        CHECK(o.code == 2);
        CHECK(o.doc()["error"]["type"] == "domain");
    }
    SUBCASE("quadrature failure") {
        // exp(20 z) needs more than 32 nodes per circle
        const Json f{{"affine", {{"scale", 20.0}, {"f", "exp"}}}};
        const Json in{{"stem", {{"scalar", f}}}, {"q", {0, 1, 0, 0}}, {"method", "contour"}, {"max_nodes", 32}};
        const Outcome o = call("eval", in, {"--nodes", "16"});
        CHECK(o.code == 0);
        CHECK(o.doc()["diagnostics"]["quadrature"]["accuracy_warning"] == true);
    }
    SUBCASE("missing input file") { CHECK(call_raw({"spectrum", "-i", "/nonexistent/q.json"}, "").code == 1); }
    SUBCASE("help") { CHECK(call_raw({"--help"}, "").code == 0); }
}

TEST_CASE("cli flags are echoed and applied") {
    const Json in{{"stem", {{"scalar", "exp"}}}, {"q", {0, 1, 0, 0}}, {"method", "contour"}};
    const Outcome o = call("eval", in, {"--nodes", "64", "--margin", "0.5", "--tol", "1e-12"});
    REQUIRE(o.code == 0);
    const Json d = o.doc();
    CHECK(d["options"]["nodes"] == 64);
    CHECK(d["options"]["margin"].get<double>() == 0.5);
    CHECK(d["diagnostics"]["quadrature"]["nodes_per_circle"].get<int>() >= 64);
}

TEST_CASE("cli file input and output") {
    const std::string in_path = tmp_path("in.json");
    const std::string out_path = tmp_path("out.json");
    {
        std::ofstream f(in_path);
        f << Json{{"q", {1, 0, 0, 2}}}.dump();
    }
    const Outcome o = call_raw({"spectrum", "--input", in_path, "--output", out_path}, "");
    REQUIRE(o.code == 0);
    CHECK(o.out.empty());
    std::ifstream f(out_path);
    const Json d = Json::parse(f);
    CHECK(re(d["result"]["s_plus"]) == doctest::Approx(1.0));
    CHECK(im(d["result"]["s_plus"]) == doctest::Approx(2.0));
    std::remove(in_path.c_str());
    std::remove(out_path.c_str());
}

TEST_CASE("cli emit-samples") {
    const std::string path = tmp_path("samples.json");
    const Json in{{"stem", {{"scalar", "sin"}}}, {"q", {0, 1, 0, 0}}};
    const Outcome o = call("eval", in, {"--emit-samples", path});
    REQUIRE(o.code == 0);
    std::ifstream f(path);
    const Json s = Json::parse(f);
    CHECK(s["command"] == "eval");
    REQUIRE_FALSE(s["samples"].empty());
    const Json& first = s["samples"][0];
    CHECK(first.contains("zeta"));
    CHECK(first["value"].size() == 2);
    std::remove(path.c_str());
}

TEST_CASE("cli round trip") {
    const Json in{{"q", {0.123456789012345678, -1e-300, 3.0e17, -0.1}}};
    const Outcome o = call("spectrum", in);
    REQUIRE(o.code == 0);
    const Json d = o.doc();
    CHECK(d["input"] == in);
    for (int k = 0; k < 4; ++k) {
        CHECK(d["input"]["q"][k].get<double>() == in["q"][k].get<double>());
    }
    // results printed by the tool read back to the same doubles
    const Json again = Json::parse(d.dump(2));
    CHECK(again == d);
    const double x = d["result"]["norm"].get<double>();
    CHECK(x == doctest::Approx(std::hypot(0.123456789012345678, 3.0e17, 0.1)).epsilon(1e-15));
}

TEST_CASE("cli output is deterministic") {
    const std::vector<std::pair<std::string, Json>> jobs{
        {"eval", Json{{"stem", {{"scalar", "exp"}}}, {"q", {0.2, 0.3, -0.4, 0.5}}}},
        {"slice-check", Json{{"stem", {{"scalar", "sin"}}}, {"count", 16}}},
        {"joint-spectrum", Json{{"T1", {{1, 2}, {-2, 1}}}, {"T2", {{0, 1}, {-1, 0}}}}},
        {"joint-calc", Json{{"T1", {{1, 0}, {0, 2}}}, {"T2", {{0, 0}, {0, 1}}},
                            {"f", {{"monomials", {{{"a", 2}}}}}}, {"resolution", 16}}},
    };
    for (const auto& [cmd, in] : jobs) {
        CAPTURE(cmd);
        const Outcome a = call(cmd, in);
        const Outcome b = call(cmd, in);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
}
