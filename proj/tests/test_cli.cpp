#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dcap/scenario.hpp"
#include "test_util.hpp"

using namespace dcap;

TEST_CASE("series text parsing") {
    TateSeries f = parse_series("3*x^2*y + 1/5*x", 2, 8);
    CHECK(f.coeff(MultiIndex({2, 1})) == Rational(3));
    CHECK(f.coeff(MultiIndex({1, 0})) == Rational(1, 5));
    CHECK(f.c.size() == 2);

    // header fields override the defaults
    TateSeries g = parse_series("p=5; vars=x,y; deg<=32; 3*x^2*y + 1/5*x", 2, 8);
    CHECK(g.cap == 32);
    CHECK(g.coeff(MultiIndex({2, 1})) == Rational(3));

    TateSeries h = parse_series("-(1/2)*x + 4 - x^3", 1, 6);
    CHECK(h.coeff(MultiIndex({1})) == Rational(-1, 2));
    CHECK(h.coeff(MultiIndex({0})) == Rational(4));
    CHECK(h.coeff(MultiIndex({3})) == Rational(-1));

    CHECK(parse_series("0", 1, 4).is_zero());
    CHECK(parse_series("x*x*x", 1, 4) == TateSeries::monomial(1, 4, MultiIndex({3}), Rational(1)));

    CHECK_THROWS_AS(parse_series("x +", 1, 4), ParseError);
    CHECK_THROWS_AS(parse_series("q^2", 1, 4), ParseError);
    CHECK_THROWS_AS(parse_series("x^", 1, 4), ParseError);
}

TEST_CASE("operator text parsing reaches normal form") {
    DiffOp P = parse_operator("(3*x^2)*d1^2*d2 + (1/5)*d1", 2, 8, 8);
    CHECK(P.coeff(MultiIndex({2, 1})) == TateSeries::monomial(2, 8, MultiIndex({2, 0}), Rational(3)));
    CHECK(P.coeff(MultiIndex({1, 0})) == TateSeries::constant(2, 8, Rational(1, 5)));

    // products normalize: d x = x d + 1
    DiffOp Q = parse_operator("d1*x", 1, 8, 8);
    CHECK(Q.coeff(MultiIndex({1})) == TateSeries::monomial(1, 8, MultiIndex({1}), Rational(1)));
    CHECK(Q.coeff(MultiIndex({0})) == TateSeries::constant(1, 8, Rational(1)));

    CHECK_THROWS_AS(parse_operator("d3", 2, 8, 8), ParseError);
}

TEST_CASE("scenario loading, defaults, and diagnostics") {
    Json j = Json::parse(R"({"op": "derham"})");
    Scenario s = load_scenario(j);
    CHECK(s.field.p == 5);
    CHECK(s.field.deg_cap == 32);
    CHECK(s.ladder == std::vector<long>{32, 64, 128});
    CHECK(validate_scenario(j).empty());

    Json bad = Json::parse(R"({"op": "derham", "caps": {"ladder": [64, 32]}})");
    CHECK_THROWS_AS(load_scenario(bad), ParseError);
    auto d1 = validate_scenario(bad);
    REQUIRE(d1.size() == 1);
    CHECK(d1[0].find("ladder") != std::string::npos);

    auto d2 = validate_scenario(Json::parse(R"({"op": "frobenius"})"));
    REQUIRE(d2.size() == 1);
    CHECK(d2[0].find("unknown operation") != std::string::npos);
    CHECK(d2[0].find("derham") != std::string::npos);  // allowed set is named

    CHECK_THROWS_AS(load_scenario(Json::parse("[1,2]")), ParseError);
    CHECK_THROWS_AS(run_scenario(load_scenario(Json::parse(R"({"op": "frobenius"})"))), UnknownOperation);
}

namespace {

Json run_json(const std::string& text) { return run_scenario(load_scenario(Json::parse(text))); }

}  // namespace

TEST_CASE("scenario runs at desk scale") {
    Json r = run_json(R"({"op": "derham", "caps": {"deg": 8, "ladder": [5, 25]}})");
    CHECK(r["verdict"] == "NON-STRICT");
    CHECK(r["results"]["lowest_kernel_dims"] == Json::array({1, 1}));
    CHECK(r["results"]["limit_cokernel_lowest_constant"] == false);

    Json c = run_json(R"({"op": "cech_disk", "params": {"D": 8}})");
    CHECK(c["verdict"] == "PASS");
    CHECK(c["results"]["h0_dim"] == 9);
    CHECK(c["results"]["h1_dim"] == 0);

    Json k = run_json(R"({"op": "i_plus", "params": {"fiber_dims": [0, 2], "dcaps": [4]}})");
    CHECK(k["verdict"] == "PASS");

    Json n = run_json(R"({"op": "i_nat", "caps": {"deg": 6}})");
    CHECK(n["verdict"] == "PASS");

    Json f = run_json(
        R"({"op": "f_shriek", "caps": {"deg": 6},
            "params": {"module": {"rank": 1, "vars": 1, "theta": [["x"]]}, "point": ["5"]}})");
    CHECK(f["verdict"] == "PASS");
    CHECK(f["results"]["shift"] == -1);
    CHECK(f["results"]["h_dims"] == Json::array({0, 1}));

    Json du = run_json(
        R"({"op": "dual", "caps": {"deg": 8, "op": 6},
            "params": {"module": {"rank": 1, "vars": 1, "theta": [["5"]]}, "level": 2}})");
    CHECK(du["verdict"] == "PASS");
    // (O, d + 5 dx) dualizes to (O, d - 5 dx)
    CHECK(du["results"]["dual_form"] == Json::array({Json{{"c", "-5"}, {"e", Json::array({0})}}}));

    Json sp = run_json(R"({"op": "spencer", "caps": {"deg": 6, "op": 5}, "params": {"m": [1, 2]}})");
    CHECK(sp["verdict"] == "PASS");

    Json ro = run_json(R"({"op": "roos", "params": {"stages": 4, "dim": 5}})");
    CHECK(ro["verdict"] == "PASS");
    CHECK(ro["results"]["equations_exact"] == true);
    CHECK(ro["results"]["certified"] == true);

    Json cm = run_json(R"({"op": "commutator", "caps": {"deg": 8, "op": 6}, "params": {"samples": 5}})");
    CHECK(cm["verdict"] == "PASS");

    Json te = run_json(R"({"op": "tensor", "caps": {"deg": 8}, "params": {"samples": 5}})");
    CHECK(te["verdict"] == "PASS");

    Json co = run_json(R"({"op": "coadmissible", "caps": {"deg": 8}, "params": {"top_level": 3}})");
    CHECK(co["verdict"] == "PASS");
}

TEST_CASE("reports are deterministic") {
    const char* text = R"({"op": "dual", "caps": {"deg": 8, "op": 6}, "params": {"samples": 3}})";
    CHECK(run_json(text).dump(2) == run_json(text).dump(2));
}

#ifdef DCAP_CLI_PATH
namespace {

int spawn(const std::string& args) {
    std::string cmd = std::string(DCAP_CLI_PATH) + " " + args;
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("driver exit codes reflect execution health") {
    std::string dir = "cli_tmp";
    std::filesystem::create_directories(dir);
    {
        std::ofstream ok(dir + "/ok.json");
        ok << R"({"op": "cech_disk", "params": {"D": 6}})";
        std::ofstream bad(dir + "/bad.json");
        bad << "{ not json";
        std::ofstream unk(dir + "/unknown.json");
        unk << R"({"op": "frobenius"})";
    }
    CHECK(spawn("run --scenario " + dir + "/ok.json --out " + dir + "/rep.json 2>/dev/null") == 0);
    CHECK(spawn("run --scenario " + dir + "/bad.json 2>/dev/null") == 2);
    CHECK(spawn("run --scenario " + dir + "/missing.json 2>/dev/null") == 2);
    CHECK(spawn("run --scenario " + dir + "/unknown.json 2>/dev/null") == 3);
    CHECK(spawn("validate --scenario " + dir + "/unknown.json > " + dir + "/diag.txt") == 0);
    CHECK(spawn("list-builtins > " + dir + "/lb.txt") == 0);

    std::ifstream rep(dir + "/rep.json");
    Json r = Json::parse(rep);
    CHECK(r["verdict"] == "PASS");

    std::stringstream lb;
    lb << std::ifstream(dir + "/lb.txt").rdbuf();
    std::string listing = lb.str();
    for (const char* must : {"derham", "cech_disk", "roos", "disk_two_cover"})
        CHECK(listing.find(must) != std::string::npos);

    std::stringstream dg;
    dg << std::ifstream(dir + "/diag.txt").rdbuf();
    CHECK(dg.str().find("unknown operation") != std::string::npos);
}
#endif
