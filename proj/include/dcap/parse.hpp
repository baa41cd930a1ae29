#pragma once

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcap/diffop.hpp"
#include "dcap/scalar.hpp"
#include "dcap/tate.hpp"

namespace dcap {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

/// Default variable names by position: x, y, z, x4, x5, ...
inline std::vector<std::string> default_vars(int m) {
    static const char* first[] = {"x", "y", "z"};
    std::vector<std::string> v;
    for (int i = 0; i < m; ++i)
        v.push_back(i < 3 ? first[i] : "x" + std::to_string(i + 1));
    return v;
}

struct Cursor {
    std::string s;
    size_t i = 0;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip();
        return i >= s.size();
    }
    char peek() {
        skip();
        return i < s.size() ? s[i] : '\0';
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw ParseError(what + " at position " + std::to_string(i) + " in \"" + s + "\"");
    }

    Rational rational() {
        skip();
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) fail("expected a number");
        std::string num = s.substr(start, i - start);
        if (eat('/')) {
            skip();
            size_t ds = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i == ds) fail("expected a denominator");
            num += "/" + s.substr(ds, i - ds);
        }
        return parse_rational(num);
    }
    std::string ident() {
        skip();
        size_t start = i;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        if (i == start) fail("expected an identifier");
        return s.substr(start, i - start);
    }
    uint32_t exponent() {
        skip();
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) fail("expected an exponent");
        return static_cast<uint32_t>(std::stoul(s.substr(start, i - start)));
    }
};

/// Recursive-descent evaluator shared by the series and operator grammars;
/// values are normal-form operators (a series is an order-zero one).
struct OpGrammar {
    Cursor cur;
    std::vector<std::string> vars;
    int op_cap, deg_cap;
    bool allow_d;

    DiffOp constant(const Rational& q) {
        DiffOp r(static_cast<int>(vars.size()), op_cap, deg_cap);
        if (!is_zero(q)) r.set(MultiIndex::zero(static_cast<int>(vars.size())), TateSeries::constant(static_cast<int>(vars.size()), deg_cap, q));
        return r;
    }

    int var_index(const std::string& name) {
        for (size_t k = 0; k < vars.size(); ++k)
            if (vars[k] == name) return static_cast<int>(k);
        return -1;
    }

    DiffOp factor() {
        if (cur.eat('(')) {
            DiffOp v = expr();
            if (!cur.eat(')')) cur.fail("expected ')'");
            return v;
        }
        char c = cur.peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return constant(cur.rational());
        std::string name = cur.ident();
        int m = static_cast<int>(vars.size());
        DiffOp base(m, op_cap, deg_cap);
        if (allow_d && name.size() >= 2 && name[0] == 'd' &&
            std::isdigit(static_cast<unsigned char>(name[1])) && var_index(name) < 0) {
            int di = std::stoi(name.substr(1));
            if (di < 1 || di > m) cur.fail("derivation index out of range: " + name);
            base = DiffOp::derivation(m, op_cap, deg_cap, di - 1);
        } else {
            int vi = var_index(name);
            if (vi < 0) cur.fail("unknown variable: " + name);
            base = DiffOp::coordinate(m, op_cap, deg_cap, vi);
        }
        if (cur.eat('^')) {
            uint32_t e = cur.exponent();
            DiffOp r = constant(Rational(1));
            for (uint32_t k = 0; k < e; ++k) r = op_mul(r, base);
            return r;
        }
        return base;
    }

    DiffOp term() {
        DiffOp v = factor();
        while (cur.eat('*')) v = op_mul(v, factor());
        return v;
    }

    DiffOp expr() {
        bool neg = false;
        if (cur.eat('-'))
            neg = true;
        else
            cur.eat('+');
        DiffOp v = term();
        if (neg) v = Rational(-1) * v;
        while (true) {
            if (cur.eat('+'))
                v = v + term();
            else if (cur.eat('-'))
                v = v - term();
            else
                break;
        }
        return v;
    }
};

/// Splits `key=value; ...; expression` headers off a series/operator text.
struct TextHeader {
    std::optional<unsigned long> p;
    std::optional<std::vector<std::string>> vars;
    std::optional<int> deg;
    std::string body;
};

inline TextHeader split_header(const std::string& text) {
    TextHeader h;
    size_t pos = 0;
    while (true) {
        size_t semi = text.find(';', pos);
        if (semi == std::string::npos) break;
        std::string seg = text.substr(pos, semi - pos);
        size_t eq = seg.find('=');
        size_t le = seg.find("<=");
        std::string key, val;
        if (le != std::string::npos && seg.find("deg") != std::string::npos) {
            key = "deg";
            val = seg.substr(le + 2);
        } else if (eq != std::string::npos) {
            key = seg.substr(0, eq);
            val = seg.substr(eq + 1);
        } else {
            break;  // not a header segment
        }
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t");
            size_t b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        key = trim(key);
        val = trim(val);
        if (key == "p")
            h.p = std::stoul(val);
        else if (key == "deg")
            h.deg = std::stoi(val);
        else if (key == "vars") {
            std::vector<std::string> names;
            size_t vp = 0;
            while (vp <= val.size()) {
                size_t comma = val.find(',', vp);
                std::string name = trim(val.substr(vp, comma == std::string::npos ? std::string::npos : comma - vp));
                if (!name.empty()) names.push_back(name);
                if (comma == std::string::npos) break;
                vp = comma + 1;
            }
            h.vars = names;
        } else {
            throw ParseError("unknown header key: " + key);
        }
        pos = semi + 1;
    }
    h.body = text.substr(pos);
    return h;
}

}  // namespace detail

/// Parses `[p=5; vars=x,y; deg<=32;] 3*x^2*y + 1/5*x`; header fields
/// override the supplied defaults.
inline TateSeries parse_series(const std::string& text, int vars, int deg_cap) {
    auto h = detail::split_header(text);
    std::vector<std::string> names = h.vars ? *h.vars : detail::default_vars(vars);
    int cap = h.deg ? *h.deg : deg_cap;
    detail::OpGrammar g{detail::Cursor{h.body}, names, 0, cap, false};
    DiffOp v = g.expr();
    if (!g.cur.eof()) g.cur.fail("trailing input");
    return v.coeff(MultiIndex::zero(static_cast<int>(names.size())));
}

/// Parses `(3*x^2)*d1^2*d2 + (1/5)*d1` into PBW normal form.
inline DiffOp parse_operator(const std::string& text, int vars, int op_cap, int deg_cap) {
    auto h = detail::split_header(text);
    std::vector<std::string> names = h.vars ? *h.vars : detail::default_vars(vars);
    int cap = h.deg ? *h.deg : deg_cap;
    detail::OpGrammar g{detail::Cursor{h.body}, names, op_cap, cap, true};
    DiffOp v = g.expr();
    if (!g.cur.eof()) g.cur.fail("trailing input");
    return v;
}

}  // namespace dcap
