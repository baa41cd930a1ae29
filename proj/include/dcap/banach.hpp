#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcap/scalar.hpp"

namespace dcap {

/// Finite-dimensional monomial-weighted Banach space: basis vector i has
/// log_p norm w[i], and |sum c_i e_i| = max_i ( log|c_i| + w_i ).
struct TruncBanach {
    std::vector<std::string> labels;
    std::vector<Rational> w;

    TruncBanach() = default;
    TruncBanach(std::vector<std::string> lbl, std::vector<Rational> wt)
        : labels(std::move(lbl)), w(std::move(wt)) {
        if (labels.size() != w.size()) throw std::invalid_argument("TruncBanach: label/weight size mismatch");
    }
    static TruncBanach unweighted(std::vector<std::string> lbl) {
        std::vector<Rational> wt(lbl.size(), Rational(0));
        return TruncBanach(std::move(lbl), std::move(wt));
    }

    int dim() const { return static_cast<int>(w.size()); }

    LogNorm norm(const std::vector<Rational>& v, unsigned long p) const {
        if (static_cast<int>(v.size()) != dim()) throw std::invalid_argument("TruncBanach::norm: dimension mismatch");
        LogNorm r = LogNorm::neg_inf();
        for (int i = 0; i < dim(); ++i)
            if (!is_zero(v[i])) r = max(r, LogNorm::of_scalar(v[i], p) + w[i]);
        return r;
    }
};

/// Sparse exact rational matrix, stored by rows.
struct QMatrix {
    int rows = 0, cols = 0;
    std::vector<std::map<int, Rational>> row;

    QMatrix() = default;
    QMatrix(int r, int c) : rows(r), cols(c), row(r) {}

    static QMatrix identity(int n) {
        QMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.row[i][i] = 1;
        return m;
    }

    void set(int i, int j, Rational q) {
        if (is_zero(q))
            row[i].erase(j);
        else
            row[i][j] = std::move(q);
    }
    void add_to(int i, int j, const Rational& q) {
        auto it = row[i].find(j);
        if (it == row[i].end()) {
            if (!is_zero(q)) row[i].emplace(j, q);
        } else {
            it->second += q;
            if (is_zero(it->second)) row[i].erase(it);
        }
    }
    Rational get(int i, int j) const {
        auto it = row[i].find(j);
        return it == row[i].end() ? Rational(0) : it->second;
    }
    bool empty() const {
        for (auto& r : row)
            if (!r.empty()) return false;
        return true;
    }
    long nnz() const {
        long n = 0;
        for (auto& r : row) n += static_cast<long>(r.size());
        return n;
    }

    std::vector<Rational> apply(const std::vector<Rational>& v) const {
        if (static_cast<int>(v.size()) != cols) throw std::invalid_argument("QMatrix::apply: dimension mismatch");
        std::vector<Rational> out(rows, Rational(0));
        for (int i = 0; i < rows; ++i)
            for (auto& [j, a] : row[i]) out[i] += a * v[j];
        return out;
    }

    /// this * other
    QMatrix compose(const QMatrix& other) const {
        if (cols != other.rows) throw std::invalid_argument("QMatrix::compose: dimension mismatch");
        QMatrix out(rows, other.cols);
        for (int i = 0; i < rows; ++i)
            for (auto& [k, a] : row[i])
                for (auto& [j, b] : other.row[k]) out.add_to(i, j, a * b);
        return out;
    }

    friend bool operator==(const QMatrix& a, const QMatrix& b) {
        return a.rows == b.rows && a.cols == b.cols && a.row == b.row;
    }
};

/// Bounded map between weighted spaces; entry (i, j) contributes
/// log|A_ij| + w_tgt[i] - w_src[j] to the operator norm.
struct BoundedMap {
    TruncBanach src, tgt;
    QMatrix A;  // tgt.dim() x src.dim()

    BoundedMap() = default;
    BoundedMap(TruncBanach s, TruncBanach t, QMatrix m)
        : src(std::move(s)), tgt(std::move(t)), A(std::move(m)) {
        if (A.rows != tgt.dim() || A.cols != src.dim())
            throw std::invalid_argument("BoundedMap: matrix shape mismatch");
    }
    static BoundedMap zero(TruncBanach s, TruncBanach t) {
        QMatrix m(t.dim(), s.dim());
        return BoundedMap(std::move(s), std::move(t), std::move(m));
    }

    LogNorm op_norm(unsigned long p) const {
        LogNorm r = LogNorm::neg_inf();
        for (int i = 0; i < A.rows; ++i)
            for (auto& [j, a] : A.row[i]) r = max(r, LogNorm::of_scalar(a, p) + tgt.w[i] - src.w[j]);
        return r;
    }
};

/// Diagonalization of a bounded map by weighted-isometric row and column
/// operations. Pivots are chosen with maximal entry operator norm, which
/// makes every elimination multiplier norm-bounded; the resulting column
/// basis is orthogonal for the weighted sup norm, so minimal-norm
/// preimages and exact kernel norms fall out of the factorization.
class WeightedSmith {
  public:
    struct Pivot {
        int row, col;
        Rational val;
    };
    struct Solution {
        std::vector<Rational> x;
        LogNorm norm;  // minimal weighted norm among all preimages
    };

    WeightedSmith(const BoundedMap& f, unsigned long p) : f_(f), p_(p) { factor(); }

    int rank() const { return static_cast<int>(pivots_.size()); }
    const std::vector<Pivot>& pivots() const { return pivots_; }
    bool pivot_col(int j) const { return is_pivot_col_[j]; }
    bool pivot_row(int i) const { return is_pivot_row_[i]; }

    /// Kernel basis vectors (orthogonal w.r.t. the weighted norm).
    std::vector<std::vector<Rational>> kernel_basis() const {
        std::vector<std::vector<Rational>> out;
        for (int j = 0; j < f_.A.cols; ++j)
            if (!is_pivot_col_[j]) out.push_back(x_column(j));
        return out;
    }

    /// Representatives of an orthogonal coimage basis (ambient source
    /// coordinates); the quotient norm of the k-th class is src.w[pivot col k].
    std::vector<std::vector<Rational>> coimage_basis() const {
        std::vector<std::vector<Rational>> out;
        for (auto& pv : pivots_) out.push_back(x_column(pv.col));
        return out;
    }
    Rational coimage_weight(int k) const { return f_.src.w[pivots_[k].col]; }

    /// Exact minimal-norm solve of A x = b; nullopt when inconsistent.
    std::optional<Solution> solve(const std::vector<Rational>& b) const {
        auto br = reduce_rhs(b);
        for (int i = 0; i < f_.A.rows; ++i)
            if (!is_pivot_row_[i] && !is_zero(br[i])) return std::nullopt;
        return assemble(br);
    }

    struct ApproxSolution {
        std::vector<Rational> x;
        LogNorm x_norm;
        std::vector<Rational> residual;  // b - A x, in target coordinates
        LogNorm residual_norm;
    };

    /// Solve A x ~= b keeping |x| <= allowed; contributions that would
    /// exceed the budget (and any inconsistent part of b) go to the residual.
    ApproxSolution solve_within(const std::vector<Rational>& b, const LogNorm& allowed) const {
        auto br = reduce_rhs(b);
        ApproxSolution out;
        out.x.assign(f_.A.cols, Rational(0));
        for (auto& pv : pivots_) {
            Rational y = br[pv.row] / pv.val;
            if (is_zero(y)) continue;
            LogNorm contrib = LogNorm::of_scalar(y, p_) + f_.src.w[pv.col];
            if (contrib <= allowed) {
                auto col = x_column(pv.col);
                for (int r = 0; r < f_.A.cols; ++r) out.x[r] += y * col[r];
            }
        }
        out.x_norm = f_.src.norm(out.x, p_);
        auto ax = f_.A.apply(out.x);
        out.residual.resize(f_.A.rows);
        for (int i = 0; i < f_.A.rows; ++i) out.residual[i] = b[i] - ax[i];
        out.residual_norm = f_.tgt.norm(out.residual, p_);
        return out;
    }

    /// Quotient norms of the cokernel classes of non-pivot target basis
    /// vectors; the classes form a basis of coker(A).
    std::vector<std::pair<int, Rational>> cokernel_weights() const {
        std::vector<std::pair<int, Rational>> out;
        for (int i = 0; i < f_.A.rows; ++i) {
            if (is_pivot_row_[i]) continue;
            // U e_i restricted to non-pivot rows, weighted norm; U is the
            // recorded row-op product, an isometry on the target.
            std::vector<Rational> u(f_.A.rows, Rational(0));
            u[i] = 1;
            for (auto& op : row_ops_) u[op.dst] += op.mult * u[op.src];
            LogNorm q = LogNorm::neg_inf();
            for (int r = 0; r < f_.A.rows; ++r)
                if (!is_pivot_row_[r] && !is_zero(u[r])) q = max(q, LogNorm::of_scalar(u[r], p_) + f_.tgt.w[r]);
            out.emplace_back(i, q.is_neg_inf() ? f_.tgt.w[i] : q.v);
        }
        return out;
    }

    const BoundedMap& map() const { return f_; }

  private:
    struct RowOp {
        int dst, src;
        Rational mult;
    };
    struct ColOp {
        int from, to;  // col[to] -= mult * col[from]
        Rational mult;
    };

    BoundedMap f_;
    unsigned long p_;
    QMatrix M_;
    std::vector<RowOp> row_ops_;
    std::vector<ColOp> col_ops_;
    std::vector<Pivot> pivots_;
    std::vector<char> is_pivot_row_, is_pivot_col_;

    // Column j of the accumulated source change of basis X = prod of
    // elementary col ops. x = X y, and X is a weighted isometry.
    std::vector<Rational> x_column(int j) const {
        std::vector<Rational> v(f_.A.cols, Rational(0));
        v[j] = 1;
        // X e_j: apply ops forward. Op "col[to] -= m col[from]" is
        // E = I - m e_from e_to^T, so (E v)[from] -= m v[to] when
        // multiplying on the left; building X e_j we fold ops in reverse.
        for (auto it = col_ops_.rbegin(); it != col_ops_.rend(); ++it)
            v[it->from] -= it->mult * v[it->to];
        return v;
    }

    std::vector<Rational> reduce_rhs(const std::vector<Rational>& b) const {
        if (static_cast<int>(b.size()) != f_.A.rows) throw std::invalid_argument("solve: rhs dimension mismatch");
        std::vector<Rational> br = b;
        for (auto& op : row_ops_) br[op.dst] += op.mult * br[op.src];
        return br;
    }

    Solution assemble(const std::vector<Rational>& br) const {
        Solution s;
        s.x.assign(f_.A.cols, Rational(0));
        s.norm = LogNorm::neg_inf();
        for (auto& pv : pivots_) {
            Rational y = br[pv.row] / pv.val;
            if (is_zero(y)) continue;
            s.norm = max(s.norm, LogNorm::of_scalar(y, p_) + f_.src.w[pv.col]);
            auto col = x_column(pv.col);
            for (int r = 0; r < f_.A.cols; ++r) s.x[r] += y * col[r];
        }
        return s;
    }

    void factor() {
        M_ = f_.A;
        is_pivot_row_.assign(M_.rows, 0);
        is_pivot_col_.assign(M_.cols, 0);
        std::vector<char> active_row(M_.rows, 1), active_col(M_.cols, 1);

        while (true) {
            int pi = -1, pj = -1;
            LogNorm best = LogNorm::neg_inf();
            for (int i = 0; i < M_.rows; ++i) {
                if (!active_row[i]) continue;
                for (auto& [j, a] : M_.row[i]) {
                    if (!active_col[j]) continue;
                    LogNorm o = LogNorm::of_scalar(a, p_) + f_.tgt.w[i] - f_.src.w[j];
                    if (pi < 0 || best < o) {
                        best = o;
                        pi = i;
                        pj = j;
                    }
                }
            }
            if (pi < 0) break;

            Rational pval = M_.get(pi, pj);
            // clear column pj in other active rows
            for (int i = 0; i < M_.rows; ++i) {
                if (i == pi || !active_row[i]) continue;
                Rational a = M_.get(i, pj);
                if (is_zero(a)) continue;
                Rational mult = -a / pval;
                for (auto& [j, v] : M_.row[pi]) M_.add_to(i, j, mult * v);
                row_ops_.push_back({i, pi, mult});
            }
            // clear row pi in other columns (only row pi is affected)
            std::vector<std::pair<int, Rational>> entries(M_.row[pi].begin(), M_.row[pi].end());
            for (auto& [j, a] : entries) {
                if (j == pj) continue;
                Rational mult = a / pval;
                M_.set(pi, j, Rational(0));
                col_ops_.push_back({pj, j, mult});
            }
            pivots_.push_back({pi, pj, pval});
            is_pivot_row_[pi] = 1;
            is_pivot_col_[pj] = 1;
            active_row[pi] = 0;
            active_col[pj] = 0;
        }
    }
};

}  // namespace dcap
