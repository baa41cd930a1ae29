#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcap/homalg.hpp"
#include "dcap/scalar.hpp"
#include "dcap/tate.hpp"

namespace dcap {

/// PBW normal form sum f_alpha d^alpha with series coefficients on the
/// left; terms truncated to operator order <= op_cap and coefficient
/// degree <= deg_cap.
struct DiffOp {
    int m = 1;
    int op_cap = 0;
    int deg_cap = 0;
    std::map<MultiIndex, TateSeries> t;  // alpha -> f_alpha

    DiffOp() = default;
    DiffOp(int vars, int order_cap, int degree_cap) : m(vars), op_cap(order_cap), deg_cap(degree_cap) {}

    static DiffOp from_series(const TateSeries& f, int order_cap) {
        DiffOp P(f.m, order_cap, f.cap);
        P.set(MultiIndex::zero(f.m), f);
        return P;
    }
    static DiffOp derivation(int vars, int order_cap, int degree_cap, int i) {
        DiffOp P(vars, order_cap, degree_cap);
        P.set(MultiIndex::unit(vars, i), TateSeries::constant(vars, degree_cap, Rational(1)));
        return P;
    }
    static DiffOp coordinate(int vars, int order_cap, int degree_cap, int i) {
        return from_series(TateSeries::monomial(vars, degree_cap, MultiIndex::unit(vars, i), Rational(1)),
                           order_cap);
    }

    bool is_zero() const { return t.empty(); }

    void set(const MultiIndex& a, const TateSeries& f) {
        if (a.vars() != m) throw std::invalid_argument("DiffOp::set: variable count mismatch");
        if (a.total() > op_cap) return;
        if (f.is_zero())
            t.erase(a);
        else
            t[a] = f;
    }
    void add_to(const MultiIndex& a, const TateSeries& f) {
        if (a.total() > op_cap || f.is_zero()) return;
        auto it = t.find(a);
        if (it == t.end())
            t.emplace(a, f);
        else {
            it->second = it->second + f;
            if (it->second.is_zero()) t.erase(it);
        }
    }
    TateSeries coeff(const MultiIndex& a) const {
        auto it = t.find(a);
        return it == t.end() ? TateSeries(m, deg_cap) : it->second;
    }

    friend DiffOp operator+(const DiffOp& P, const DiffOp& Q) {
        check_compat(P, Q);
        DiffOp r = P;
        for (auto& [a, f] : Q.t) r.add_to(a, f);
        return r;
    }
    friend DiffOp operator-(const DiffOp& P, const DiffOp& Q) {
        check_compat(P, Q);
        DiffOp r = P;
        for (auto& [a, f] : Q.t) r.add_to(a, -f);
        return r;
    }
    friend DiffOp operator*(const Rational& s, const DiffOp& P) {
        DiffOp r(P.m, P.op_cap, P.deg_cap);
        if (dcap::is_zero(s)) return r;
        for (auto& [a, f] : P.t) r.t.emplace(a, s * f);
        return r;
    }
    friend bool operator==(const DiffOp& P, const DiffOp& Q) { return P.m == Q.m && P.t == Q.t; }

    static void check_compat(const DiffOp& P, const DiffOp& Q) {
        if (P.m != Q.m) throw std::invalid_argument("DiffOp: variable count mismatch");
    }
};

inline mpz_class binomial(uint32_t n, uint32_t k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

/// Normal form of the composite, via d^a o f = sum_{b <= a} C(a,b) d^b(f) d^{a-b}.
inline DiffOp op_mul(const DiffOp& P, const DiffOp& Q) {
    DiffOp::check_compat(P, Q);
    DiffOp r(P.m, P.op_cap, P.deg_cap);
    for (auto& [a, fa] : P.t) {
        for (auto& [b, gb] : Q.t) {
            // odometer over all gamma <= a
            std::vector<uint32_t> g(P.m, 0);
            while (true) {
                MultiIndex gamma(g);
                // binomial prod C(a_i, g_i)
                Rational coef(1);
                for (int i = 0; i < P.m; ++i) coef *= Rational(binomial(a.e[i], g[i]));
                TateSeries dg = gb;
                bool vanished = false;
                for (int i = 0; i < P.m && !vanished; ++i)
                    for (uint32_t k = 0; k < g[i]; ++k) {
                        dg = derive(dg, i);
                        if (dg.is_zero()) {
                            vanished = true;
                            break;
                        }
                    }
                if (!vanished && !dg.is_zero()) {
                    MultiIndex order = a.minus(gamma).plus(b);
                    if (order.total() <= P.op_cap) r.add_to(order, series_mul(fa, coef * dg));
                }
                // next gamma <= a (odometer)
                int i = 0;
                for (; i < P.m; ++i) {
                    if (g[i] < a.e[i]) {
                        ++g[i];
                        break;
                    }
                    g[i] = 0;
                }
                if (i == P.m) break;
            }
        }
    }
    return r;
}

/// P applied to a series: sum f_alpha d^alpha(f), truncated.
inline TateSeries op_apply(const DiffOp& P, const TateSeries& f) {
    if (P.m != f.m) throw std::invalid_argument("op_apply: variable count mismatch");
    TateSeries r(f.m, f.cap);
    for (auto& [a, fa] : P.t) {
        TateSeries df = f;
        bool vanished = false;
        for (int i = 0; i < P.m && !vanished; ++i)
            for (uint32_t k = 0; k < a.e[i]; ++k) {
                df = derive(df, i);
                if (df.is_zero()) {
                    vanished = true;
                    break;
                }
            }
        if (!vanished) r = r + series_mul(fa, df);
    }
    return r;
}

/// |P|_n = max_alpha ( Gauss-log|f_alpha| + n|alpha| ).
inline LogNorm op_level_norm(const DiffOp& P, int n, unsigned long p) {
    LogNorm r = LogNorm::neg_inf();
    for (auto& [a, fa] : P.t) r = max(r, gauss_norm(fa, p) + Rational(static_cast<long>(n) * a.total()));
    return r;
}

struct CommutatorPreimage {
    DiffOp C;                // P = C*y_m - y_m*C at truncation
    LogNorm certified_bound; // |P|_n + (n-1) in log form; dominates |C|_{n-1}
};

/// The division step behind Kashiwara's equivalence: decompose
/// P = sum_j Q_j p^{nj} d_m^j with Q_j free of d_m, and return
/// C = sum_j Q_j p^{nj} d_m^{j+1} / (j+1). The commutator orientation
/// C y - y C = P is the one the multiplication oracle verifies.
inline CommutatorPreimage commutator_preimage(const DiffOp& P, int coord, int n, unsigned long p) {
    if (n < 1) throw std::invalid_argument("commutator_preimage: level must be >= 1 (no room for the drop)");
    if (coord < 0 || coord >= P.m) throw std::invalid_argument("commutator_preimage: coordinate out of range");
    // C may exceed P's order cap by one; give it room so the identity is exact.
    DiffOp C(P.m, P.op_cap + 1, P.deg_cap);
    for (auto& [a, fa] : P.t) {
        uint32_t j = a.e[coord];
        MultiIndex b = a;
        b.e[coord] = j + 1;
        C.add_to(b, Rational(1, static_cast<long>(j) + 1) * fa);
    }
    CommutatorPreimage out;
    out.C = std::move(C);
    LogNorm pn = op_level_norm(P, n, p);
    out.certified_bound = pn + Rational(n - 1);
    return out;
}

// ---------------------------------------------------------------------------
// Spencer complex
// ---------------------------------------------------------------------------

/// Basis bookkeeping for the truncated level algebra D_n on the m-polydisk:
/// monomials x^g d^a with |g| <= deg_cap and |a| <= the given order cap.
struct DnBasis {
    int m;
    int deg_cap;
    int ord_cap;
    std::vector<std::pair<MultiIndex, MultiIndex>> mono;  // (x exponent, d exponent)
    std::map<std::pair<std::vector<uint32_t>, std::vector<uint32_t>>, int> index;

    DnBasis(int vars, int degree_cap, int order_cap) : m(vars), deg_cap(degree_cap), ord_cap(order_cap) {
        auto xs = enumerate(vars, degree_cap);
        auto ds = enumerate(vars, order_cap);
        for (auto& g : xs)
            for (auto& a : ds) {
                index[{g.e, a.e}] = static_cast<int>(mono.size());
                mono.emplace_back(g, a);
            }
    }

    static std::vector<MultiIndex> enumerate(int vars, int cap) {
        std::vector<MultiIndex> out;
        std::vector<uint32_t> e(vars, 0);
        while (true) {
            MultiIndex a(e);
            if (a.total() <= cap) out.push_back(a);
            int i = 0;
            for (; i < vars; ++i) {
                if (static_cast<int>(e[i]) < cap) {
                    ++e[i];
                    break;
                }
                e[i] = 0;
            }
            if (i == vars) break;
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    int dim() const { return static_cast<int>(mono.size()); }
    int find(const MultiIndex& g, const MultiIndex& a) const {
        auto it = index.find({g.e, a.e});
        return it == index.end() ? -1 : it->second;
    }

    TruncBanach space(int level, const std::string& tag) const {
        std::vector<std::string> lbl;
        std::vector<Rational> wt;
        for (auto& [g, a] : mono) {
            lbl.push_back(tag);
            wt.push_back(Rational(static_cast<long>(level) * a.total()));
        }
        return TruncBanach(std::move(lbl), std::move(wt));
    }
};

/// Truncated Spencer complex D_n (x) wedge^k T -> ... -> D_n -> O for
/// coordinate polydisks; bracket terms vanish for coordinate fields but the
/// general double-sum differential is evaluated. Operator-order caps
/// decrease with exterior degree so every differential lands inside its
/// target truncation and the surviving range is exact.
struct SpencerComplex {
    Complex complex;                     // degrees -m .. 0 then the augmentation target O
    std::vector<std::vector<int>> sets;  // wedge index sets per exterior degree
};

inline std::vector<std::vector<int>> subsets_of_size(int m, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < m; ++i) {
            cur.push_back(i);
            rec(i + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

inline SpencerComplex spencer_complex(const GlobalField& K, int m, int level) {
    if (m < 1 || m > 3) throw std::invalid_argument("spencer_complex: 1 <= m <= 3");
    if (level < 0 || level > K.max_level) throw std::invalid_argument("spencer_complex: bad level");

    SpencerComplex out;
    // term k = exterior degree; operator-order cap op_cap - k
    std::vector<DnBasis> bases;
    for (int k = m; k >= 0; --k) bases.emplace_back(m, K.deg_cap, K.op_cap - k);

    Complex C;
    C.lo = -m;  // degrees -m..0 are the Spencer terms, degree 1 holds O
    std::vector<std::vector<std::vector<int>>> setlists;
    for (int k = m; k >= 0; --k) setlists.push_back(subsets_of_size(m, k));

    // spaces
    for (int idx = 0; idx <= m; ++idx) {
        int k = m - idx;  // exterior degree
        const DnBasis& B = bases[idx];
        int copies = static_cast<int>(setlists[idx].size());
        std::vector<std::string> lbl;
        std::vector<Rational> wt;
        for (int c = 0; c < copies; ++c)
            for (auto& [g, a] : B.mono) {
                (void)g;
                lbl.push_back("S" + std::to_string(k));
                wt.push_back(Rational(static_cast<long>(level) * a.total()));
            }
        C.spaces.push_back(TruncBanach(std::move(lbl), std::move(wt)));
    }
    // augmentation target: O with monomial basis
    {
        auto xs = DnBasis::enumerate(m, K.deg_cap);
        std::vector<std::string> lbl(xs.size(), "O");
        std::vector<Rational> wt(xs.size(), Rational(0));
        C.spaces.push_back(TruncBanach(std::move(lbl), std::move(wt)));
    }

    // differentials between Spencer terms
    for (int idx = 0; idx + 1 <= m; ++idx) {
        int k = m - idx;
        const DnBasis& Bs = bases[idx];
        const DnBasis& Bt = bases[idx + 1];
        const auto& ss = setlists[idx];
        const auto& ts = setlists[idx + 1];
        auto tpos = [&](const std::vector<int>& s) {
            for (size_t i = 0; i < ts.size(); ++i)
                if (ts[i] == s) return static_cast<int>(i);
            throw std::logic_error("spencer: missing wedge subset");
        };
        QMatrix A(C.spaces[idx + 1].dim(), C.spaces[idx].dim());
        for (size_t c = 0; c < ss.size(); ++c) {
            const auto& S = ss[c];
            for (int b = 0; b < Bs.dim(); ++b) {
                auto [g, a] = Bs.mono[b];
                int col = static_cast<int>(c) * Bs.dim() + b;
                // sum_j (-1)^{j+1} P d_j (x) wedge-minus-j; brackets of
                // coordinate fields vanish, so the double sum contributes 0.
                for (size_t jpos = 0; jpos < S.size(); ++jpos) {
                    int j = S[jpos];
                    std::vector<int> rest;
                    for (size_t q = 0; q < S.size(); ++q)
                        if (q != jpos) rest.push_back(S[q]);
                    MultiIndex a2 = a.plus(MultiIndex::unit(m, j));
                    int rb = Bt.find(g, a2);
                    if (rb < 0) continue;
                    int sign = (jpos % 2 == 0) ? 1 : -1;  // (-1)^{j+1} with 1-based position
                    int rowc = tpos(rest);
                    A.add_to(rowc * Bt.dim() + rb, col, Rational(sign));
                }
            }
        }
        C.diffs.push_back(BoundedMap(C.spaces[idx], C.spaces[idx + 1], std::move(A)));
    }
    // augmentation P -> P(1): keeps the order-zero part
    {
        const DnBasis& B0 = bases[m];
        auto xs = DnBasis::enumerate(m, K.deg_cap);
        std::map<std::vector<uint32_t>, int> xidx;
        for (size_t i = 0; i < xs.size(); ++i) xidx[xs[i].e] = static_cast<int>(i);
        QMatrix A(static_cast<int>(xs.size()), C.spaces[m].dim());
        for (int b = 0; b < B0.dim(); ++b) {
            auto [g, a] = B0.mono[b];
            if (a.total() != 0) continue;
            A.set(xidx.at(g.e), b, Rational(1));
        }
        C.diffs.push_back(BoundedMap(C.spaces[m], C.spaces[m + 1], std::move(A)));
    }

    out.complex = std::move(C);
    for (auto& sl : setlists) out.sets.emplace_back(1, static_cast<int>(sl.size()));
    return out;
}

/// The d-only factor of the Spencer complex (x-degree fixed): same shape,
/// coefficient field in place of O. Its ranks multiply by the number of
/// x-monomials to give the ranks of the full complex, since the Spencer
/// differential of a coordinate polydisk preserves the x-grading.
inline SpencerComplex spencer_factor_complex(const GlobalField& K, int m, int level) {
    GlobalField K0 = K;
    K0.deg_cap = 0;
    return spencer_complex(K0, m, level);
}

}  // namespace dcap
