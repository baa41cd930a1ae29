#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcap/tower.hpp"
#include "test_util.hpp"

using namespace dcap;

namespace {

const unsigned long P = 5;

/// V_n = K^dim with weights w_n(j) = n*j, identity transitions.
InverseSystem level_tower(int stages, int dim) {
    InverseSystem S;
    for (int n = 0; n < stages; ++n) {
        std::vector<std::string> lbl;
        std::vector<Rational> wt;
        for (int j = 0; j < dim; ++j) {
            lbl.push_back("e" + std::to_string(j));
            wt.push_back(Rational(static_cast<long>(n) * j));
        }
        S.spaces.push_back(TruncBanach(std::move(lbl), std::move(wt)));
    }
    for (int n = 0; n + 1 < stages; ++n)
        S.rho.push_back(BoundedMap(S.spaces[n + 1], S.spaces[n], QMatrix::identity(dim)));
    return S;
}

PrenuclearWitness linear_witness(int stages, Rational base, Rational slope) {
    PrenuclearWitness w;
    w.base.assign(stages, base);
    w.slope.assign(stages, slope);
    return w;
}

}  // namespace

TEST_CASE("tower validation") {
    InverseSystem S = level_tower(4, 3);
    CHECK_NOTHROW(S.validate());
    S.rho.pop_back();
    CHECK_THROWS_AS(S.validate(), std::invalid_argument);
}

TEST_CASE("push-down composites and their norm bounds") {
    InverseSystem S = level_tower(4, 3);
    std::vector<Rational> v = {Rational(1), Rational(1, 5), Rational(25)};
    auto w = S.push_down(0, 3, v);
    CHECK(w == v);  // identity transitions
    // transitions only lower the weights, so the bound is zero
    CHECK(S.push_down_norm(0, 3, P) == Rational(0));
}

TEST_CASE("witness realization on the level tower") {
    InverseSystem S = level_tower(5, 4);
    S.witness = linear_witness(5, Rational(0), Rational(1));
    // unit vector of V_{n+1}: e_j scaled to norm <= 1
    for (int n = 0; n + 2 < S.stages(); ++n) {
        for (int j = 0; j < 4; ++j) {
            std::vector<Rational> x(4, Rational(0));
            x[j] = pow_p(P, static_cast<long>((n + 1) * j));
            for (Rational t : {Rational(0), Rational(2), Rational(5)}) {
                auto st = witness_solve(S, n, x, t, P);
                CHECK(st.ok);
                CHECK(st.w_norm <= S.witness->radius(n, t));
                CHECK(st.error_norm <= LogNorm::of(-t));
            }
        }
    }
}

TEST_CASE("witness checker passes the honest schedule and rejects a tight one") {
    InverseSystem S = level_tower(5, 4);
    S.witness = linear_witness(5, Rational(0), Rational(1));
    BoundedBall unit;
    for (int n = 0; n < 5; ++n) unit.radius.push_back(LogNorm::of(Rational(0)));
    CHECK(prenuclear_check(S, {unit}, P).pass);

    // flat radius 0 cannot absorb the weight gap at every tolerance
    S.witness = linear_witness(5, Rational(0), Rational(0));
    auto v = prenuclear_check(S, {unit}, P);
    CHECK(!v.pass);
    CHECK(v.str().substr(0, 4) == "FAIL");
}

TEST_CASE("scaled inputs are handled by rescaling") {
    InverseSystem S = level_tower(5, 3);
    S.witness = linear_witness(5, Rational(0), Rational(1));
    // norm p^2 input
    std::vector<Rational> x = {Rational(1, 25), Rational(0), Rational(0)};
    auto st = witness_solve(S, 0, x, Rational(1), P);
    CHECK(st.ok);
    CHECK(st.w_norm <= S.witness->radius(0, Rational(3)) + Rational(2));
}

TEST_CASE("tower limit preimages solve the gluing equations exactly") {
    auto rng = testutil::seeded_rng();
    InverseSystem S = level_tower(6, 4);
    S.witness = linear_witness(6, Rational(0), Rational(1));
    BoundedBall B;
    for (int n = 0; n < 6; ++n) B.radius.push_back(LogNorm::of(Rational(0)));

    for (int rep = 0; rep < 10; ++rep) {
        std::vector<std::vector<Rational>> target;
        for (int i = 0; i < 5; ++i) {
            std::vector<Rational> t(4, Rational(0));
            for (int j = 0; j < 4; ++j) {
                // keep each component inside the unit ball of V_i
                Rational q = testutil::random_rational(rng, P, 0, 2);
                t[j] = q * pow_p(P, static_cast<long>(i * j));
            }
            target.push_back(t);
        }
        auto out = roos_preimage(S, target, B, P);
        // y_i - rho(y_{i+1}) = t_i in every degree
        for (int i = 0; i < 5; ++i) {
            auto r = S.rho[i].A.apply(out.y[i + 1]);
            for (int j = 0; j < 4; ++j) CHECK(out.y[i][j] - r[j] == target[i][j]);
        }
        CHECK(out.certified);
        for (int i = 0; i < 6; ++i) CHECK(out.actual_norm[i] <= out.certificate[i]);
    }
}

TEST_CASE("preimage construction demands a witness and a bounded target") {
    InverseSystem S = level_tower(4, 2);
    BoundedBall B;
    for (int n = 0; n < 4; ++n) B.radius.push_back(LogNorm::of(Rational(0)));
    std::vector<std::vector<Rational>> target(3, std::vector<Rational>(2, Rational(0)));
    CHECK_THROWS_AS(roos_preimage(S, target, B, P), std::invalid_argument);
    S.witness = linear_witness(4, Rational(0), Rational(1));
    target[0][0] = Rational(1, 25);  // norm p^2 > ball radius 1
    CHECK_THROWS_AS(roos_preimage(S, target, B, P), std::invalid_argument);
}
