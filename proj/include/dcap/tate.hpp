#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dcap/scalar.hpp"

namespace dcap {

/// Exponent tuple over m variables, ordered by (total degree, lex).
struct MultiIndex {
    std::vector<uint32_t> e;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<uint32_t> exps) : e(std::move(exps)) {}
    static MultiIndex zero(int m) { return MultiIndex(std::vector<uint32_t>(m, 0)); }
    static MultiIndex unit(int m, int i) {
        MultiIndex a = zero(m);
        a.e[i] = 1;
        return a;
    }

    int vars() const { return static_cast<int>(e.size()); }
    long total() const {
        long s = 0;
        for (auto x : e) s += x;
        return s;
    }
    MultiIndex plus(const MultiIndex& b) const {
        MultiIndex r = *this;
        for (size_t i = 0; i < e.size(); ++i) r.e[i] += b.e[i];
        return r;
    }
    bool dominates(const MultiIndex& b) const {
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] < b.e[i]) return false;
        return true;
    }
    MultiIndex minus(const MultiIndex& b) const {
        MultiIndex r = *this;
        for (size_t i = 0; i < e.size(); ++i) r.e[i] -= b.e[i];
        return r;
    }

    // graded lex
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
        long ta = a.total(), tb = b.total();
        if (ta != tb) return ta < tb;
        return a.e < b.e;
    }
    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e == b.e; }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a == b); }
};

/// Truncated strictly convergent power series: coefficients on monomials
/// of total degree <= cap, exact rational coefficients.
struct TateSeries {
    int m = 1;
    int cap = 0;
    std::map<MultiIndex, Rational> c;

    TateSeries() = default;
    TateSeries(int vars, int degree_cap) : m(vars), cap(degree_cap) {}

    static TateSeries constant(int vars, int degree_cap, Rational q) {
        TateSeries f(vars, degree_cap);
        f.set(MultiIndex::zero(vars), std::move(q));
        return f;
    }
    static TateSeries monomial(int vars, int degree_cap, const MultiIndex& a, Rational q) {
        TateSeries f(vars, degree_cap);
        f.set(a, std::move(q));
        return f;
    }

    bool is_zero() const { return c.empty(); }

    void set(const MultiIndex& a, Rational q) {
        if (a.vars() != m) throw std::invalid_argument("TateSeries::set: variable count mismatch");
        if (a.total() > cap) return;  // hard truncation
        if (dcap::is_zero(q))
            c.erase(a);
        else
            c[a] = std::move(q);
    }
    void add_to(const MultiIndex& a, const Rational& q) {
        if (a.total() > cap) return;
        auto it = c.find(a);
        if (it == c.end()) {
            if (!dcap::is_zero(q)) c.emplace(a, q);
        } else {
            it->second += q;
            if (dcap::is_zero(it->second)) c.erase(it);
        }
    }
    Rational coeff(const MultiIndex& a) const {
        auto it = c.find(a);
        return it == c.end() ? Rational(0) : it->second;
    }

    TateSeries truncated(int new_cap) const {
        TateSeries r(m, new_cap);
        for (auto& [a, q] : c)
            if (a.total() <= new_cap) r.c.emplace(a, q);
        return r;
    }

    friend TateSeries operator+(const TateSeries& f, const TateSeries& g) {
        check_compat(f, g);
        TateSeries r = f;
        for (auto& [a, q] : g.c) r.add_to(a, q);
        return r;
    }
    friend TateSeries operator-(const TateSeries& f, const TateSeries& g) {
        check_compat(f, g);
        TateSeries r = f;
        for (auto& [a, q] : g.c) r.add_to(a, -q);
        return r;
    }
    friend TateSeries operator*(const Rational& s, const TateSeries& f) {
        TateSeries r(f.m, f.cap);
        if (dcap::is_zero(s)) return r;
        for (auto& [a, q] : f.c) r.c.emplace(a, s * q);
        return r;
    }
    friend TateSeries operator-(const TateSeries& f) { return Rational(-1) * f; }
    friend bool operator==(const TateSeries& f, const TateSeries& g) {
        return f.m == g.m && f.c == g.c;
    }

    static void check_compat(const TateSeries& f, const TateSeries& g) {
        if (f.m != g.m) throw std::invalid_argument("TateSeries: variable count mismatch");
        if (f.cap != g.cap) throw std::invalid_argument("TateSeries: degree cap mismatch");
    }
};

/// Product truncated to total degree <= cap.
inline TateSeries series_mul(const TateSeries& f, const TateSeries& g) {
    TateSeries::check_compat(f, g);
    TateSeries r(f.m, f.cap);
    for (auto& [a, qa] : f.c) {
        long ta = a.total();
        for (auto& [b, qb] : g.c) {
            if (ta + b.total() > f.cap) continue;
            r.add_to(a.plus(b), qa * qb);
        }
    }
    return r;
}

/// Formal partial derivative in variable i; cap preserved.
inline TateSeries derive(const TateSeries& f, int i) {
    if (i < 0 || i >= f.m) throw std::invalid_argument("derive: variable index out of range");
    TateSeries r(f.m, f.cap);
    for (auto& [a, q] : f.c) {
        if (a.e[i] == 0) continue;
        MultiIndex b = a;
        b.e[i] -= 1;
        r.add_to(b, Rational(static_cast<long>(a.e[i])) * q);
    }
    return r;
}

/// Gauss norm max_a |c_a| in log_p form.
inline LogNorm gauss_norm(const TateSeries& f, unsigned long p) {
    LogNorm r = LogNorm::neg_inf();
    for (auto& [a, q] : f.c) r = max(r, LogNorm::of_scalar(q, p));
    return r;
}

/// Level-n norm: max_a ( n|a| - v_p(c_a) ) in log_p form.
inline LogNorm level_norm(const TateSeries& f, int n, unsigned long p) {
    LogNorm r = LogNorm::neg_inf();
    for (auto& [a, q] : f.c) r = max(r, LogNorm::of_scalar(q, p) + Rational(static_cast<long>(n) * a.total()));
    return r;
}

/// Substitution x_i -> p x_i, i.e. restriction to the subdisk of radius |p|.
inline TateSeries restrict_subdisk(const TateSeries& f, unsigned long p) {
    TateSeries r(f.m, f.cap);
    for (auto& [a, q] : f.c) r.c.emplace(a, pow_p(p, a.total()) * q);
    return r;
}

/// The family n -> |f|_n for 0 <= n <= max_level.
struct NormFamily {
    std::vector<LogNorm> at;  // index = level

    bool monotone() const {
        for (size_t i = 0; i + 1 < at.size(); ++i)
            if (!(at[i] <= at[i + 1])) return false;
        return true;
    }
};

inline NormFamily kx_profile(const TateSeries& f, const GlobalField& K) {
    NormFamily fam;
    for (int n = 0; n <= K.max_level; ++n) fam.at.push_back(level_norm(f, n, K.p));
    return fam;
}

/// One-variable Laurent coefficients on the window [-cap, cap], viewed as
/// a function on the circle |x| = |p|^s.
struct LaurentWindow {
    int cap = 0;
    int s = 1;
    std::map<long, Rational> c;

    LaurentWindow() = default;
    LaurentWindow(int window_cap, int radius_exp) : cap(window_cap), s(radius_exp) {}

    void set(long j, Rational q) {
        if (j < -cap || j > cap) throw std::out_of_range("LaurentWindow: exponent outside window");
        if (dcap::is_zero(q))
            c.erase(j);
        else
            c[j] = std::move(q);
    }
    Rational coeff(long j) const {
        auto it = c.find(j);
        return it == c.end() ? Rational(0) : it->second;
    }
    bool is_zero() const { return c.empty(); }

    LogNorm norm(unsigned long p) const {
        LogNorm r = LogNorm::neg_inf();
        for (auto& [j, q] : c) r = max(r, LogNorm::of_scalar(q, p) - Rational(static_cast<long>(s) * j));
        return r;
    }

    friend LaurentWindow operator-(const LaurentWindow& f, const LaurentWindow& g) {
        LaurentWindow r(f.cap, f.s);
        r.c = f.c;
        for (auto& [j, q] : g.c) {
            auto it = r.c.find(j);
            if (it == r.c.end())
                r.c.emplace(j, -q);
            else {
                it->second -= q;
                if (dcap::is_zero(it->second)) r.c.erase(it);
            }
        }
        return r;
    }
    friend bool operator==(const LaurentWindow& f, const LaurentWindow& g) { return f.c == g.c; }
};

/// Splits h on the circle |x| = |p| as h = f|_cap - g|_cap with f
/// holomorphic on the inner disk and g on the annulus.
inline std::pair<TateSeries, LaurentWindow> laurent_split(const LaurentWindow& h) {
    if (h.s != 1) throw std::invalid_argument("laurent_split: expects the circle |x| = |p|");
    TateSeries f(1, h.cap);
    LaurentWindow g(h.cap, h.s);
    for (auto& [j, q] : h.c) {
        if (j >= 0)
            f.set(MultiIndex({static_cast<uint32_t>(j)}), q);
        else
            g.set(j, -q);
    }
    return {f, g};
}

/// Truncated model of S(V): finitely many entries v_i with the per-level
/// profile n -> max_i ( |v_i| + n*i ) witnessing boundedness of {p^{-ni} v_i}.
struct SequenceSpace {
    std::vector<TateSeries> entries;

    NormFamily bound_profile(const GlobalField& K) const {
        NormFamily fam;
        for (int n = 0; n <= K.max_level; ++n) {
            LogNorm b = LogNorm::neg_inf();
            for (size_t i = 0; i < entries.size(); ++i)
                b = max(b, gauss_norm(entries[i], K.p) + Rational(static_cast<long>(n) * static_cast<long>(i)));
            fam.at.push_back(b);
        }
        return fam;
    }
};

}  // namespace dcap
