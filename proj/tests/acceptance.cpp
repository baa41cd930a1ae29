// Acceptance checks: twelve end-to-end properties of the library at the
// default configuration p = 5, series cap D = 32, operator cap 16, four
// levels, cap ladder (32, 64, 128). All arithmetic is exact; every check
// prints one PASS/FAIL line and the exit code is the number of failures.
#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "dcap/scenario.hpp"

using namespace dcap;

namespace {

int failures = 0;

template <class F>
void criterion(int n, const std::string& what, F body) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string err;
    try {
        ok = body();
    } catch (const std::exception& e) {
        err = e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << " (" << ms.count() << " ms) " << what;
    if (!err.empty()) std::cout << " [" << err << "]";
    std::cout << std::endl;
    if (!ok) ++failures;
}

const GlobalField K(5, 32, 16, 4);
const std::vector<long> LADDER = {32, 64, 128};

}  // namespace

int main() {
    criterion(1, "disk de Rham: flat sections one-dimensional at every ladder cap", [] {
        ConnectionModule O = ConnectionModule::trivial(1, 1, K.deg_cap);
        PushforwardReport rep = derham_pushforward_point(O, K, LADDER);
        bool ok = rep.lowest_kernel_dims.size() == LADDER.size();
        for (int d : rep.lowest_kernel_dims) ok = ok && d == 1;
        return ok;
    });

    criterion(2, "d on the disk: preimage profiles floor(log_5 cap) at 25/125/625, NON-STRICT", [] {
        ConnectionModule O = ConnectionModule::trivial(1, 1, K.deg_cap);
        PushforwardReport rep = derham_pushforward_point(O, K, {25, 125, 625});
        const StrictnessReport& st = rep.strictness.at(0);
        return st.profile_max.size() == 3 && st.profile_max[0].str() == "2" && st.profile_max[1].str() == "3" &&
               st.profile_max[2].str() == "4" && st.verdict == "NON-STRICT";
    });

    criterion(3, "completed cokernel: x^j dx vanishes for j <= 10, constant 1 in degree -1 does not", [] {
        ConnectionModule O = ConnectionModule::trivial(1, 1, K.deg_cap);
        int top = static_cast<int>(LADDER.back());
        std::vector<TateSeries> forms;
        for (uint32_t j = 0; j <= 10; ++j)
            forms.push_back(TateSeries::monomial(1, top, MultiIndex({j}), Rational(1)));
        std::vector<bool> hit = derham_limit_cokernel_batch(O, K, LADDER, 0, forms);
        bool ok = hit.size() == forms.size();
        for (bool h : hit) ok = ok && h;
        return ok && !derham_limit_cokernel(O, K, LADDER, -1, TateSeries::constant(1, top, Rational(1)));
    });

    criterion(4, "Cech two-cover of the disk: H0 is the cap-32 Tate algebra, all overlap cochains split", [] {
        int D = K.deg_cap;
        Complex C = cech_complex(DiskCover::two_cover, D, 1);
        if (cohomology(C, 0, K.p).kernel_dim() != D + 1) return false;
        if (cohomology(C, 1, K.p).classical_dim() != 0) return false;
        for (long j = -D; j <= D; ++j) {
            LaurentWindow h(D, 1);
            h.set(j, Rational(1));
            auto [f, g] = laurent_split(h);
            if (!(cech_glue_defect(f, g) == h)) return false;
        }
        return true;
    });

    criterion(5, "Kashiwara roundtrip for fibers of dim 0..3 at d-caps 8/16/32; restriction of connections is 0", [] {
        for (int r : {0, 1, 2, 3})
            for (int c : {8, 16, 32})
                if (!kashiwara_roundtrip(r, c, K.p)) return false;
        auto rng = seeded_rng();
        if (kashiwara_restrict(ConnectionModule::trivial(1, 1, K.deg_cap), K).dim != 0) return false;
        TateSeries a = random_series(rng, K.p, 1, K.deg_cap, 3, 3);
        if (kashiwara_restrict(ConnectionModule::rank1(1, K.deg_cap, {a}), K).dim != 0) return false;
        return kashiwara_restrict(random_flat_rank2(rng, K.p, 2, 8), K).dim == 0;
    });

    criterion(6, "50 random operators at level 2: commutator preimage exact with |C|_1 <= |P|_2 + 1", [] {
        auto rng = seeded_rng();
        for (int t = 0; t < 50; ++t) {
            DiffOp P = random_operator(rng, K.p, 1, K.op_cap, K.deg_cap, 4, 3);
            CommutatorPreimage cp = commutator_preimage(P, 0, 2, K.p);
            DiffOp y = DiffOp::coordinate(1, cp.C.op_cap, cp.C.deg_cap, 0);
            DiffOp Pc(1, cp.C.op_cap, cp.C.deg_cap);
            for (auto& [a, f] : P.t) Pc.set(a, f);
            if (!(op_mul(cp.C, y) - op_mul(y, cp.C) == Pc)) return false;
            if (!(op_level_norm(cp.C, 1, K.p) <= op_level_norm(P, 2, K.p) + Rational(1))) return false;
        }
        return true;
    });

    criterion(7, "Spencer complexes for m = 1, 2: zero composition exactly, exact by rank counts", [] {
        for (int m : {1, 2}) {
            SpencerComplex full = spencer_complex(K, m, 1);
            full.complex.validate();  // throws if any composition is nonzero
            SpencerComplex fac = spencer_factor_complex(K, m, 1);
            std::vector<int> dims, ranks;
            for (auto& sp : fac.complex.spaces) dims.push_back(sp.dim());
            for (auto& d : fac.complex.diffs) ranks.push_back(WeightedSmith(d, K.p).rank());
            if (ranks.front() != dims.front() || ranks.back() != dims.back()) return false;
            for (size_t k = 1; k + 1 < dims.size(); ++k)
                if (ranks[k - 1] + ranks[k] != dims[k]) return false;
            long nx = static_cast<long>(DnBasis::enumerate(m, K.deg_cap).size());
            for (size_t k = 0; k < dims.size(); ++k)
                if (full.complex.spaces[k].dim() != nx * dims[k]) return false;
        }
        return true;
    });

    criterion(8, "side-changing and biduality identities on 20 random rank-1 modules", [] {
        auto rng = seeded_rng();
        for (int t = 0; t < 20; ++t) {
            TateSeries a = random_series(rng, K.p, 1, K.deg_cap, 3, 3);
            ConnectionModule M = ConnectionModule::rank1(1, K.deg_cap, {a});
            DualReport rep = dual_rank1(M, 2, K);
            if (!rep.pass || !rep.matches_o_dual) return false;
            if (!(dual_rank1(rep.dual, 2, K).dual.theta[0] == M.theta[0])) return false;
            if (!(side_change_inv(side_change(M)).theta[0] == M.theta[0])) return false;
        }
        return true;
    });

    criterion(9, "tensor adds rank-1 connection forms; flatness preserved on 20 random flat rank-2 pairs", [] {
        auto rng = seeded_rng();
        for (int t = 0; t < 20; ++t) {
            TateSeries a = random_series(rng, K.p, 1, K.deg_cap, 4, 3);
            TateSeries b = random_series(rng, K.p, 1, K.deg_cap, 4, 3);
            ConnectionModule T = tensor_O(ConnectionModule::rank1(1, K.deg_cap, {a}),
                                          ConnectionModule::rank1(1, K.deg_cap, {b}));
            if (!(T.theta[0].at(0, 0) == a + b)) return false;
        }
        for (int t = 0; t < 20; ++t) {
            // the product constructor re-verifies flatness and throws otherwise
            ConnectionModule M = random_flat_rank2(rng, K.p, 2, 8);
            ConnectionModule N = random_flat_rank2(rng, K.p, 2, 8);
            if (tensor_O(M, N).rank != 4) return false;
        }
        return true;
    });

    criterion(10, "Mittag-Leffler on the weighted 6-stage tower of dim 33: exact Roos equations, sound certificate", [] {
        const int stages = 6, dim = 33;
        InverseSystem S;
        for (int n = 0; n < stages; ++n) {
            std::vector<std::string> lbl;
            std::vector<Rational> wt;
            for (int j = 0; j < dim; ++j) {
                lbl.push_back("x^" + std::to_string(j));
                wt.push_back(Rational(static_cast<long>(n) * j));
            }
            S.spaces.push_back(TruncBanach(std::move(lbl), std::move(wt)));
        }
        for (int n = 0; n + 1 < stages; ++n)
            S.rho.push_back(BoundedMap(S.spaces[n + 1], S.spaces[n], QMatrix::identity(dim)));
        PrenuclearWitness w;
        w.base.assign(stages, Rational(0));
        w.slope.assign(stages, Rational(1));
        S.witness = w;

        BoundedBall B;
        B.radius.assign(stages, LogNorm::of(Rational(0)));
        std::vector<std::vector<Rational>> target;
        for (int i = 0; i + 1 < stages; ++i) {
            std::vector<Rational> t(dim);
            for (int j = 0; j < dim; ++j) t[j] = pow_p(K.p, static_cast<long>(i) * j);
            target.push_back(std::move(t));
        }
        RoosPreimage r = roos_preimage(S, target, B, K.p);
        for (int i = 0; i + 1 < stages; ++i) {
            auto img = S.rho[i].A.apply(r.y[i + 1]);
            for (int j = 0; j < dim; ++j)
                if (r.y[i][j] - img[j] != target[i][j]) return false;
        }
        if (!r.certified) return false;
        if (!prenuclear_check(S, {B}, K.p).pass) return false;
        InverseSystem bad = S;
        bad.witness->slope.assign(stages, Rational(0));
        return !prenuclear_check(bad, {B}, K.p).pass;
    });

    criterion(11, "exponential kernels: bounded flat sections dim 0 for d+dx, dim 1 for d+5dx, vs. recursion oracle", [] {
        for (long lam : {1L, 5L}) {
            ConnectionModule M =
                ConnectionModule::rank1(1, K.deg_cap, {TateSeries::constant(1, K.deg_cap, Rational(lam))});
            PushforwardReport rep = derham_pushforward_point(M, K, LADDER);
            if (rep.bounded_kernel_dim != (lam == 1 ? 0 : 1)) return false;

            // coefficient oracle at cap 30: the kernel is spanned by
            // sum (-lam)^k / k! x^k, bounded exactly when lam kills v_5(k!)
            const int cap = 30;
            Complex C = derham_complex(ConnectionModule::rank1(1, cap, {TateSeries::constant(1, cap, Rational(lam))}),
                                       cap, K.p);
            auto kb = WeightedSmith(C.diffs[0], K.p).kernel_basis();
            if (kb.size() != 1 || kb[0][0] == 0) return false;
            mpz_class fact = 1;
            Rational sign = 1;
            for (int k = 0; k <= cap; ++k) {
                if (k > 0) {
                    fact *= k;
                    sign *= Rational(-lam);
                }
                if (kb[0][k] / kb[0][0] != sign / Rational(fact)) return false;
            }
        }
        return true;
    });

    criterion(12, "coadmissibility over levels 4..0 on connection and cyclic towers; perturbation caught", [] {
        auto rng = seeded_rng();
        const int cap = 10, top = 4;
        ConnectionModule M = random_flat_rank2(rng, K.p, 2, cap);
        std::vector<LevelPresentation> ct;
        for (int n = top; n >= 0; --n) ct.push_back(LevelPresentation::of_connection(M, n));
        std::vector<DiffOp> cs;
        for (int t = 0; t < 3; ++t) cs.push_back(random_operator(rng, K.p, 2, 6, cap, 2, 2));
        if (!coadmissibility_check(ct, cs).pass) return false;

        DiffOp P(1, K.op_cap, cap);
        P.set(MultiIndex({1}), TateSeries::constant(1, cap, Rational(1)));
        P.set(MultiIndex({0}), random_series(rng, K.p, 1, cap, 3, 2));
        std::vector<LevelPresentation> cyc;
        for (int n = top; n >= 0; --n) cyc.push_back(LevelPresentation::of_cyclic(P, n));
        std::vector<DiffOp> ops1;
        for (int t = 0; t < 3; ++t) ops1.push_back(random_operator(rng, K.p, 1, 6, cap, 3, 2));
        if (!coadmissibility_check(cyc, ops1).pass) return false;

        DiffOp P2 = P;
        P2.add_to(MultiIndex({0}), TateSeries::constant(1, cap, Rational(1)));
        cyc[2] = LevelPresentation::of_cyclic(P2, top - 2);
        TowerVerdict bad = coadmissibility_check(cyc, ops1);
        return !bad.pass && bad.stage == 2;
    });

    std::cout << (failures == 0 ? "all criteria passed" : "failures: " + std::to_string(failures)) << std::endl;
    return failures;
}
