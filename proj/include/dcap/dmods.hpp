#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcap/diffop.hpp"
#include "dcap/tate.hpp"

namespace dcap {

/// Dense matrix with truncated-series entries.
struct SeriesMat {
    int rows = 0, cols = 0;
    int m = 1, cap = 0;
    std::vector<TateSeries> a;  // row-major

    SeriesMat() = default;
    SeriesMat(int r, int c, int vars, int degree_cap)
        : rows(r), cols(c), m(vars), cap(degree_cap), a(static_cast<size_t>(r) * c, TateSeries(vars, degree_cap)) {}

    static SeriesMat identity(int n, int vars, int degree_cap) {
        SeriesMat I(n, n, vars, degree_cap);
        for (int i = 0; i < n; ++i) I.at(i, i) = TateSeries::constant(vars, degree_cap, Rational(1));
        return I;
    }

    TateSeries& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const TateSeries& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool is_zero() const {
        for (auto& e : a)
            if (!e.is_zero()) return false;
        return true;
    }

    friend SeriesMat operator+(const SeriesMat& x, const SeriesMat& y) {
        check(x, y);
        SeriesMat r = x;
        for (size_t k = 0; k < r.a.size(); ++k) r.a[k] = r.a[k] + y.a[k];
        return r;
    }
    friend SeriesMat operator-(const SeriesMat& x, const SeriesMat& y) {
        check(x, y);
        SeriesMat r = x;
        for (size_t k = 0; k < r.a.size(); ++k) r.a[k] = r.a[k] - y.a[k];
        return r;
    }
    friend SeriesMat operator*(const SeriesMat& x, const SeriesMat& y) {
        if (x.cols != y.rows || x.m != y.m || x.cap != y.cap)
            throw std::invalid_argument("SeriesMat: shape mismatch in product");
        SeriesMat r(x.rows, y.cols, x.m, x.cap);
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                if (x.at(i, k).is_zero()) continue;
                for (int j = 0; j < y.cols; ++j)
                    r.at(i, j) = r.at(i, j) + series_mul(x.at(i, k), y.at(k, j));
            }
        return r;
    }
    friend bool operator==(const SeriesMat& x, const SeriesMat& y) {
        return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }

    SeriesMat transpose() const {
        SeriesMat r(cols, rows, m, cap);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
        return r;
    }
    SeriesMat negated() const {
        SeriesMat r = *this;
        for (auto& e : r.a) e = -e;
        return r;
    }

    static void check(const SeriesMat& x, const SeriesMat& y) {
        if (x.rows != y.rows || x.cols != y.cols || x.m != y.m || x.cap != y.cap)
            throw std::invalid_argument("SeriesMat: shape mismatch");
    }
};

inline SeriesMat derive(const SeriesMat& x, int i) {
    SeriesMat r = x;
    for (auto& e : r.a) e = derive(e, i);
    return r;
}

/// Kronecker product a (x) b.
inline SeriesMat kron(const SeriesMat& x, const SeriesMat& y) {
    if (x.m != y.m || x.cap != y.cap) throw std::invalid_argument("kron: incompatible entries");
    SeriesMat r(x.rows * y.rows, x.cols * y.cols, x.m, x.cap);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) {
            if (x.at(i, j).is_zero()) continue;
            for (int k = 0; k < y.rows; ++k)
                for (int l = 0; l < y.cols; ++l)
                    r.at(i * y.rows + k, j * y.cols + l) = series_mul(x.at(i, j), y.at(k, l));
        }
    return r;
}

/// Free O-module with a flat connection nabla_i = d_i + Theta_i; flatness
/// d_i Theta_j - d_j Theta_i + [Theta_i, Theta_j] = 0 is enforced exactly
/// at truncation on construction.
struct ConnectionModule {
    int m = 1;
    int rank = 1;
    int cap = 0;
    std::vector<SeriesMat> theta;  // theta[i] is rank x rank

    ConnectionModule() = default;
    ConnectionModule(int vars, int r, int degree_cap, std::vector<SeriesMat> th)
        : m(vars), rank(r), cap(degree_cap), theta(std::move(th)) {
        if (static_cast<int>(theta.size()) != m)
            throw std::invalid_argument("ConnectionModule: one matrix per variable required");
        for (auto& t : theta)
            if (t.rows != rank || t.cols != rank || t.m != m || t.cap != cap)
                throw std::invalid_argument("ConnectionModule: matrix shape mismatch");
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) {
                SeriesMat curv = derive(theta[j], i) - derive(theta[i], j) +
                                 theta[i] * theta[j] - theta[j] * theta[i];
                if (!curv.is_zero())
                    throw std::invalid_argument("ConnectionModule: connection is not flat at (" +
                                                std::to_string(i) + "," + std::to_string(j) + ")");
            }
    }

    static ConnectionModule trivial(int vars, int r, int degree_cap) {
        std::vector<SeriesMat> th(vars, SeriesMat(r, r, vars, degree_cap));
        return ConnectionModule(vars, r, degree_cap, std::move(th));
    }
    /// Rank-1 module (O, d + a_1 dx_1 + ... + a_m dx_m); requires the form
    /// to be closed.
    static ConnectionModule rank1(int vars, int degree_cap, std::vector<TateSeries> form) {
        std::vector<SeriesMat> th;
        for (auto& f : form) {
            SeriesMat t(1, 1, vars, degree_cap);
            t.at(0, 0) = f;
            th.push_back(std::move(t));
        }
        return ConnectionModule(vars, 1, degree_cap, std::move(th));
    }

    /// nabla_i applied to a section (column of series).
    std::vector<TateSeries> nabla(int i, const std::vector<TateSeries>& s) const {
        std::vector<TateSeries> r(rank, TateSeries(m, cap));
        for (int k = 0; k < rank; ++k) {
            r[k] = derive(s[k], i);
            for (int l = 0; l < rank; ++l) r[k] = r[k] + series_mul(theta[i].at(k, l), s[l]);
        }
        return r;
    }
    /// P acting through the connection: sum g_a nabla^a (s).
    std::vector<TateSeries> apply_op(const DiffOp& P, std::vector<TateSeries> s) const {
        std::vector<TateSeries> out(rank, TateSeries(m, cap));
        for (auto& [a, g] : P.t) {
            std::vector<TateSeries> v = s;
            for (int i = 0; i < m; ++i)
                for (uint32_t k = 0; k < a.e[i]; ++k) v = nabla(i, v);
            for (int k = 0; k < rank; ++k) out[k] = out[k] + series_mul(g, v[k]);
        }
        return out;
    }
};

/// Free right module; basis vectors act by eps_k . d_i = -sum_l A_i[l,k] eps_l
/// and sections by s . d_i = -d_i(s) - A_i s. The twist marker records that
/// the module arose from tensoring with the top forms.
struct RightModule {
    int m = 1;
    int rank = 1;
    int cap = 0;
    std::vector<SeriesMat> A;
    bool twisted = false;

    /// s . d_i
    std::vector<TateSeries> act(int i, const std::vector<TateSeries>& s) const {
        std::vector<TateSeries> r(rank, TateSeries(m, cap));
        for (int k = 0; k < rank; ++k) {
            r[k] = -derive(s[k], i);
            for (int l = 0; l < rank; ++l) r[k] = r[k] - series_mul(A[i].at(k, l), s[l]);
        }
        return r;
    }
    /// s . P for P = sum g_a d^a: scalars multiply first, derivations then
    /// act one at a time on the right.
    std::vector<TateSeries> act_op(const DiffOp& P, const std::vector<TateSeries>& s) const {
        std::vector<TateSeries> out(rank, TateSeries(m, cap));
        for (auto& [a, g] : P.t) {
            std::vector<TateSeries> v(rank, TateSeries(m, cap));
            for (int k = 0; k < rank; ++k) v[k] = series_mul(s[k], g);
            for (int i = 0; i < m; ++i)
                for (uint32_t k = 0; k < a.e[i]; ++k) v = act(i, v);
            for (int k = 0; k < rank; ++k) out[k] = out[k] + v[k];
        }
        return out;
    }
};

/// Tensor over O: Theta_i = Theta^M_i (x) I + I (x) Theta^N_i.
inline ConnectionModule tensor_O(const ConnectionModule& M, const ConnectionModule& N) {
    if (M.m != N.m || M.cap != N.cap)
        throw std::invalid_argument("tensor_O: ambient polydisk mismatch");
    std::vector<SeriesMat> th;
    SeriesMat IM = SeriesMat::identity(M.rank, M.m, M.cap);
    SeriesMat IN = SeriesMat::identity(N.rank, N.m, N.cap);
    for (int i = 0; i < M.m; ++i) th.push_back(kron(M.theta[i], IN) + kron(IM, N.theta[i]));
    return ConnectionModule(M.m, M.rank * N.rank, M.cap, std::move(th));
}

/// Tensoring with the top forms: on the basis dx-bar (x) e_k the right
/// action is forced by (d (x) m) . P = (d . P) (x) m - d (x) (P m) with the
/// Lie-derivative action on dx-bar vanishing for coordinate fields.
inline RightModule side_change(const ConnectionModule& M) {
    RightModule N;
    N.m = M.m;
    N.rank = M.rank;
    N.cap = M.cap;
    N.A = M.theta;
    N.twisted = true;
    return N;
}

inline ConnectionModule side_change_inv(const RightModule& N) {
    if (!N.twisted) throw std::invalid_argument("side_change_inv: module does not carry the form twist");
    return ConnectionModule(N.m, N.rank, N.cap, N.A);
}

/// O-linear dual with the dual connection Theta -> -Theta^T.
inline ConnectionModule o_dual(const ConnectionModule& M) {
    std::vector<SeriesMat> th;
    for (auto& t : M.theta) th.push_back(t.transpose().negated());
    return ConnectionModule(M.m, M.rank, M.cap, std::move(th));
}

// ---------------------------------------------------------------------------
// Level presentations and coadmissible towers
// ---------------------------------------------------------------------------

/// Finite-level presentation of a module over the level-n algebra: either a
/// free module with the connection relations d_i e_k - (Theta_i e)_k, or a
/// cyclic one-variable module D_n / D_n P. The relation data itself is
/// level-independent; the level records which unit ball measures it.
struct LevelPresentation {
    enum class Kind { connection, cyclic };
    Kind kind = Kind::connection;
    int level = 0;
    std::optional<ConnectionModule> conn;
    std::optional<DiffOp> cyclic;  // one variable, monic of positive order

    static LevelPresentation of_connection(const ConnectionModule& M, int n) {
        LevelPresentation P;
        P.kind = Kind::connection;
        P.level = n;
        P.conn = M;
        return P;
    }
    static LevelPresentation of_cyclic(const DiffOp& op, int n) {
        if (op.m != 1) throw std::invalid_argument("LevelPresentation: cyclic modules are one-variable");
        LevelPresentation P;
        P.kind = Kind::cyclic;
        P.level = n;
        P.cyclic = op;
        return P;
    }

    int rank() const { return kind == Kind::connection ? conn->rank : 1; }

    friend bool operator==(const LevelPresentation& a, const LevelPresentation& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == Kind::connection)
            return a.conn->m == b.conn->m && a.conn->rank == b.conn->rank && a.conn->theta == b.conn->theta;
        return *a.cyclic == *b.cyclic;
    }
};

/// The coadmissible base change D_{n-1} (x)_{D_n} M_n: same relation data
/// reinterpreted one level down.
inline LevelPresentation base_change_level(const LevelPresentation& P) {
    if (P.level < 1) throw std::invalid_argument("base_change_level: already at level 0");
    LevelPresentation Q = P;
    Q.level = P.level - 1;
    return Q;
}

/// Division by a monic one-variable operator: Q = S P + R with the order of
/// R below the order of P. Requires the leading coefficient of P to be a
/// nonzero constant.
struct OpDivision {
    DiffOp S, R;
};

inline OpDivision op_divmod(const DiffOp& Q, const DiffOp& P) {
    if (P.m != 1 || Q.m != 1) throw std::invalid_argument("op_divmod: one-variable only");
    if (P.is_zero()) throw std::invalid_argument("op_divmod: division by zero");
    long d = 0;
    for (auto& [a, f] : P.t) d = std::max(d, a.total());
    TateSeries lead = P.coeff(MultiIndex({static_cast<uint32_t>(d)}));
    Rational lc = lead.coeff(MultiIndex::zero(1));
    if (is_zero(lc) || !(lead == TateSeries::constant(1, lead.cap, lc)))
        throw std::invalid_argument("op_divmod: leading coefficient must be a nonzero constant");

    OpDivision out;
    out.S = DiffOp(1, Q.op_cap, Q.deg_cap);
    out.R = Q;
    while (true) {
        long top = -1;
        MultiIndex ta;
        for (auto& [a, f] : out.R.t)
            if (a.total() > top) {
                top = a.total();
                ta = a;
            }
        if (top < d) break;
        // kill the top term: R -= (f/lc) d^{top-d} * P
        TateSeries f = out.R.coeff(ta);
        DiffOp mono(1, Q.op_cap, Q.deg_cap);
        mono.set(MultiIndex({static_cast<uint32_t>(top - d)}), Rational(1, 1) / lc * f);
        out.S = out.S + mono;
        out.R = out.R - op_mul(mono, P);
    }
    return out;
}

/// Normal form of Q modulo the relations of P (class of Q . generator):
/// cyclic modules reduce by division, connection modules act through nabla.
inline std::vector<TateSeries> reduce_mod(const LevelPresentation& P, const DiffOp& Q) {
    if (P.kind == LevelPresentation::Kind::cyclic) {
        auto dv = op_divmod(Q, *P.cyclic);
        std::vector<TateSeries> out;
        long d = 0;
        for (auto& [a, f] : P.cyclic->t) d = std::max(d, a.total());
        for (long j = 0; j < d; ++j) out.push_back(dv.R.coeff(MultiIndex({static_cast<uint32_t>(j)})));
        return out;
    }
    // class of Q e_k stacked over k
    std::vector<TateSeries> out;
    for (int k = 0; k < P.conn->rank; ++k) {
        std::vector<TateSeries> e(P.conn->rank, TateSeries(P.conn->m, P.conn->cap));
        e[k] = TateSeries::constant(P.conn->m, P.conn->cap, Rational(1));
        auto v = P.conn->apply_op(Q, e);
        for (auto& s : v) out.push_back(s);
    }
    return out;
}

struct TowerVerdict {
    bool pass = true;
    int stage = -1;  // first failing index into the tower when FAIL

    std::string str() const { return pass ? "PASS" : "FAIL at stage " + std::to_string(stage); }
};

/// Tower listed from the top level downward; PASS when every stage is the
/// base change of the one before it, both as relation data and on sampled
/// normal forms.
inline TowerVerdict coadmissibility_check(const std::vector<LevelPresentation>& tower,
                                          const std::vector<DiffOp>& samples = {}) {
    if (tower.size() < 2) throw std::invalid_argument("coadmissibility_check: tower of length >= 2 required");
    TowerVerdict v;
    for (size_t i = 0; i + 1 < tower.size(); ++i) {
        if (tower[i].level != tower[i + 1].level + 1 || !(base_change_level(tower[i]) == tower[i + 1])) {
            v.pass = false;
            v.stage = static_cast<int>(i + 1);
            return v;
        }
        for (auto& Q : samples)
            if (reduce_mod(tower[i], Q) != reduce_mod(tower[i + 1], Q)) {
                v.pass = false;
                v.stage = static_cast<int>(i + 1);
                return v;
            }
    }
    return v;
}

}  // namespace dcap
