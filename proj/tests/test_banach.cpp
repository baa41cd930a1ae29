#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dcap/banach.hpp"
#include "test_util.hpp"

using namespace dcap;

namespace {

const unsigned long P = 5;

BoundedMap random_map(std::mt19937_64& rng, int rows, int cols, double density = 0.6) {
    std::uniform_int_distribution<int> wd(-3, 3);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<Rational> ws, wt;
    std::vector<std::string> ls, lt;
    for (int j = 0; j < cols; ++j) {
        ws.push_back(Rational(wd(rng)));
        ls.push_back("s" + std::to_string(j));
    }
    for (int i = 0; i < rows; ++i) {
        wt.push_back(Rational(wd(rng)));
        lt.push_back("t" + std::to_string(i));
    }
    QMatrix A(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (coin(rng) < density) A.set(i, j, testutil::random_rational(rng, P, -2, 2));
    return BoundedMap(TruncBanach(ls, ws), TruncBanach(lt, wt), A);
}

std::vector<Rational> random_vec(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> coin(0, 2);
    std::vector<Rational> v(n, Rational(0));
    for (int i = 0; i < n; ++i)
        if (coin(rng)) v[i] = testutil::random_rational(rng, P, -2, 2);
    return v;
}

}  // namespace

TEST_CASE("weighted norm") {
    TruncBanach V({"a", "b"}, {Rational(0), Rational(-2)});
    CHECK(V.norm({Rational(1), Rational(0)}, P).v == Rational(0));
    CHECK(V.norm({Rational(0), Rational(1)}, P).v == Rational(-2));
    CHECK(V.norm({Rational(1, 5), Rational(25)}, P).v == Rational(1));
    CHECK(V.norm({Rational(0), Rational(0)}, P).is_neg_inf());
}

TEST_CASE("matrix apply and compose") {
    QMatrix A(2, 2), B(2, 2);
    A.set(0, 1, Rational(2));
    A.set(1, 0, Rational(3));
    B.set(0, 0, Rational(1));
    B.set(1, 1, Rational(5));
    auto C = A.compose(B);
    CHECK(C.get(0, 1) == Rational(10));
    CHECK(C.get(1, 0) == Rational(3));
    auto v = A.apply({Rational(1), Rational(2)});
    CHECK(v[0] == Rational(4));
    CHECK(v[1] == Rational(3));
    CHECK(QMatrix::identity(3).compose(QMatrix::identity(3)) == QMatrix::identity(3));
}

TEST_CASE("operator norm accounts for the weights") {
    TruncBanach V({"a"}, {Rational(0)});
    TruncBanach W({"b"}, {Rational(-1)});
    QMatrix A(1, 1);
    A.set(0, 0, Rational(5));
    CHECK(BoundedMap(V, W, A).op_norm(P).v == Rational(-2));  // |5| * p^{-1}
    CHECK(BoundedMap(V, W, QMatrix(1, 1)).op_norm(P).is_neg_inf());
}

TEST_CASE("diagonalization: kernel, rank, exact solve") {
    auto rng = testutil::seeded_rng();
    for (int rep = 0; rep < 60; ++rep) {
        BoundedMap f = random_map(rng, 4, 6);
        WeightedSmith sm(f, P);
        // kernel vectors really lie in the kernel
        auto kb = sm.kernel_basis();
        CHECK(static_cast<int>(kb.size()) == 6 - sm.rank());
        for (auto& v : kb) {
            auto img = f.A.apply(v);
            for (auto& c : img) CHECK(is_zero(c));
        }
        // solving a known image recovers a preimage
        auto x0 = random_vec(rng, 6);
        auto b = f.A.apply(x0);
        auto sol = sm.solve(b);
        REQUIRE(sol.has_value());
        auto back = f.A.apply(sol->x);
        for (int i = 0; i < 4; ++i) CHECK(back[i] == b[i]);
        CHECK(sol->norm == f.src.norm(sol->x, P));
        // minimality: no kernel shift improves the norm
        CHECK(sol->norm <= f.src.norm(x0, P));
        for (int t = 0; t < 5 && !kb.empty(); ++t) {
            auto y = sol->x;
            for (auto& v : kb) {
                Rational c = testutil::random_rational(rng, P, -2, 2);
                for (size_t i = 0; i < y.size(); ++i) y[i] += c * v[i];
            }
            CHECK(sol->norm <= f.src.norm(y, P));
        }
    }
}

TEST_CASE("kernel basis is orthogonal for the weighted norm") {
    auto rng = testutil::seeded_rng();
    for (int rep = 0; rep < 40; ++rep) {
        BoundedMap f = random_map(rng, 3, 6);
        WeightedSmith sm(f, P);
        auto kb = sm.kernel_basis();
        if (kb.empty()) continue;
        std::vector<Rational> combo(6, Rational(0));
        LogNorm expect = LogNorm::neg_inf();
        for (auto& v : kb) {
            Rational c = testutil::random_rational(rng, P, -2, 2);
            for (int i = 0; i < 6; ++i) combo[i] += c * v[i];
            expect = max(expect, LogNorm::of_scalar(c, P) + f.src.norm(v, P));
        }
        CHECK(f.src.norm(combo, P) == expect);
    }
}

TEST_CASE("inconsistent systems are reported") {
    TruncBanach V({"a"}, {Rational(0)});
    TruncBanach W({"b", "c"}, {Rational(0), Rational(0)});
    QMatrix A(2, 1);
    A.set(0, 0, Rational(1));
    WeightedSmith sm(BoundedMap(V, W, A), P);
    CHECK(!sm.solve({Rational(0), Rational(1)}).has_value());
    CHECK(sm.solve({Rational(3), Rational(0)}).has_value());
}

TEST_CASE("cokernel quotient weights on a diagonal map") {
    TruncBanach V({"a", "b"}, {Rational(0), Rational(0)});
    TruncBanach W({"x", "y", "z"}, {Rational(0), Rational(0), Rational(-1)});
    QMatrix A(3, 2);
    A.set(0, 0, Rational(1));
    A.set(1, 1, Rational(5));
    WeightedSmith sm(BoundedMap(V, W, A), P);
    CHECK(sm.rank() == 2);
    auto cw = sm.cokernel_weights();
    REQUIRE(cw.size() == 1);
    CHECK(cw[0].first == 2);
    CHECK(cw[0].second == Rational(-1));
}

TEST_CASE("budgeted solve splits head and tail") {
    // diagonal action 1, p^2 on an unweighted pair
    TruncBanach V = TruncBanach::unweighted({"a", "b"});
    QMatrix A(2, 2);
    A.set(0, 0, Rational(1));
    A.set(1, 1, Rational(25));
    WeightedSmith sm(BoundedMap(V, V, A), P);
    std::vector<Rational> b = {Rational(1), Rational(1)};
    // exact preimage is (1, 1/25) with norm p^2; cap the budget at 1
    auto ap = sm.solve_within(b, LogNorm::of(Rational(0)));
    CHECK(ap.x[0] == Rational(1));
    CHECK(ap.x[1] == Rational(0));
    CHECK(ap.x_norm.v == Rational(0));
    CHECK(ap.residual[1] == Rational(1));
    CHECK(ap.residual_norm.v == Rational(0));
    // with a large budget the residual vanishes
    auto full = sm.solve_within(b, LogNorm::of(Rational(5)));
    CHECK(full.residual_norm.is_neg_inf());
    CHECK(full.x[1] == Rational(1, 25));
}

TEST_CASE("coimage representatives project onto the image") {
    auto rng = testutil::seeded_rng();
    for (int rep = 0; rep < 30; ++rep) {
        BoundedMap f = random_map(rng, 4, 5);
        WeightedSmith sm(f, P);
        auto cb = sm.coimage_basis();
        REQUIRE(static_cast<int>(cb.size()) == sm.rank());
        // images of coimage representatives are linearly independent
        QMatrix M(4, sm.rank());
        for (int k = 0; k < sm.rank(); ++k) {
            auto img = f.A.apply(cb[k]);
            for (int i = 0; i < 4; ++i) M.set(i, k, img[i]);
        }
        WeightedSmith chk(BoundedMap(TruncBanach::unweighted(std::vector<std::string>(sm.rank(), "")),
                                     TruncBanach::unweighted(std::vector<std::string>(4, "")), M),
                          P);
        CHECK(chk.rank() == sm.rank());
    }
}
