#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>

namespace dcap {

using Rational = mpq_class;

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }

/// Global arithmetic configuration: the prime p (which is also the
/// uniformizer), the truncation caps for series degree and operator
/// order, and the number of levels kept in norm families.
struct GlobalField {
    unsigned long p = 5;
    int deg_cap = 32;
    int op_cap = 16;
    int max_level = 4;

    GlobalField() = default;
    GlobalField(unsigned long p_, int deg_cap_, int op_cap_, int max_level_)
        : p(p_), deg_cap(deg_cap_), op_cap(op_cap_), max_level(max_level_) {
        validate();
    }

    void validate() const {
        if (!is_prime(p)) throw std::invalid_argument("GlobalField: p must be prime");
        if (deg_cap < 1) throw std::invalid_argument("GlobalField: deg_cap >= 1 required");
        if (op_cap < 1) throw std::invalid_argument("GlobalField: op_cap >= 1 required");
        if (max_level < 1) throw std::invalid_argument("GlobalField: max_level >= 1 required");
    }

    static bool is_prime(unsigned long n) {
        if (n < 2) return false;
        for (unsigned long d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }
};

/// p-adic valuation of a rational; nullopt encodes v(0) = +infinity.
inline std::optional<long> valuation(const Rational& q, unsigned long p) {
    if (is_zero(q)) return std::nullopt;
    mpz_class pz(p), tmp;
    long vn = static_cast<long>(mpz_remove(tmp.get_mpz_t(), q.get_num().get_mpz_t(), pz.get_mpz_t()));
    long vd = static_cast<long>(mpz_remove(tmp.get_mpz_t(), q.get_den().get_mpz_t(), pz.get_mpz_t()));
    return vn - vd;
}

/// v_p(k!) by Legendre's formula.
inline long factorial_valuation(unsigned long k, unsigned long p) {
    long v = 0;
    for (unsigned long q = p; q <= k; q *= p) {
        v += static_cast<long>(k / q);
        if (q > k / p) break;  // guard overflow of q *= p
    }
    return v;
}

/// A log_p-scaled norm value: rational, or -infinity for the zero vector.
/// |q| = p^{LogNorm}, so LogNorm(q) = -valuation(q).
struct LogNorm {
    bool finite = false;   // false == -infinity
    Rational v = 0;

    static LogNorm neg_inf() { return LogNorm{}; }
    static LogNorm of(Rational r) { return LogNorm{true, std::move(r)}; }
    static LogNorm of_scalar(const Rational& q, unsigned long p) {
        auto val = valuation(q, p);
        if (!val) return neg_inf();
        return of(Rational(-*val));
    }

    bool is_neg_inf() const { return !finite; }

    friend bool operator==(const LogNorm& a, const LogNorm& b) {
        if (a.finite != b.finite) return false;
        return !a.finite || a.v == b.v;
    }
    friend bool operator<(const LogNorm& a, const LogNorm& b) {
        if (!a.finite) return b.finite;
        if (!b.finite) return false;
        return a.v < b.v;
    }
    friend bool operator<=(const LogNorm& a, const LogNorm& b) { return a < b || a == b; }
    friend bool operator>(const LogNorm& a, const LogNorm& b) { return b < a; }
    friend bool operator>=(const LogNorm& a, const LogNorm& b) { return b <= a; }

    friend LogNorm max(const LogNorm& a, const LogNorm& b) { return a < b ? b : a; }

    /// Product of norms (sum in log form); -inf absorbs.
    friend LogNorm operator+(const LogNorm& a, const LogNorm& b) {
        if (!a.finite || !b.finite) return neg_inf();
        return of(a.v + b.v);
    }
    friend LogNorm operator+(const LogNorm& a, const Rational& r) {
        if (!a.finite) return neg_inf();
        return of(a.v + r);
    }
    friend LogNorm operator-(const LogNorm& a, const Rational& r) {
        if (!a.finite) return neg_inf();
        return of(a.v - r);
    }

    std::string str() const {
        if (!finite) return "-inf";
        return v.get_str();
    }
};

inline Rational pow_p(unsigned long p, long e) {
    Rational r;
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0) return Rational(pe);
    return Rational(1) / Rational(pe);
}

inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

inline std::string rational_str(const Rational& q) { return q.get_str(); }

}  // namespace dcap
