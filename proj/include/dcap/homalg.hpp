#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcap/banach.hpp"
#include "dcap/tate.hpp"

namespace dcap {

/// Chain complex of weighted spaces; diffs[k] maps spaces[k] -> spaces[k+1]
/// and consecutive differentials compose to zero exactly.
struct Complex {
    int lo = 0;
    std::vector<TruncBanach> spaces;
    std::vector<BoundedMap> diffs;

    int degrees() const { return static_cast<int>(spaces.size()); }
    const TruncBanach& space(int j) const { return spaces.at(j - lo); }
    bool has_diff(int j) const { return j >= lo && j - lo < static_cast<int>(diffs.size()); }
    const BoundedMap& diff(int j) const { return diffs.at(j - lo); }

    void validate() const {
        for (size_t k = 0; k + 1 < diffs.size(); ++k)
            if (!diffs[k + 1].A.compose(diffs[k].A).empty())
                throw std::logic_error("Complex: d o d != 0 at index " + std::to_string(k));
        for (size_t k = 0; k < diffs.size(); ++k)
            if (diffs[k].A.cols != spaces[k].dim() || diffs[k].A.rows != spaces[k + 1].dim())
                throw std::logic_error("Complex: differential shape mismatch");
    }
};

/// The left-heart cohomology pair coim d^{j-1} -> ker d^j, with the
/// classical cokernel and exact quotient/subspace weights.
struct LeftHeartObject {
    TruncBanach coim;  // weights = quotient norms
    TruncBanach ker;   // weights = subspace norms of an orthogonal basis
    QMatrix inclusion;  // ker.dim x coim.dim, injective
    std::vector<std::vector<Rational>> ker_basis;   // ambient coordinates
    std::vector<std::vector<Rational>> coim_basis;  // ambient source representatives
    TruncBanach classical_part;  // coker(inclusion) with quotient weights
    bool is_strict = true;

    int kernel_dim() const { return ker.dim(); }
    int classical_dim() const { return classical_part.dim(); }
};

/// Coordinate lookup in the orthogonal kernel basis produced by a
/// WeightedSmith factorization; factors the change of basis once.
class KernelCoords {
  public:
    KernelCoords(const WeightedSmith& sm, unsigned long p) {
        int n = sm.map().A.cols;
        auto kb = sm.kernel_basis();
        auto cb = sm.coimage_basis();
        std::vector<std::vector<Rational>> cols;
        for (size_t k = 0; k < kb.size(); ++k) {
            cols.push_back(kb[k]);
            which_.push_back(static_cast<int>(k));
        }
        for (auto& c : cb) {
            cols.push_back(c);
            which_.push_back(-1);
        }
        if (static_cast<int>(cols.size()) != n) throw std::logic_error("KernelCoords: basis is not full");
        QMatrix X(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (!is_zero(cols[j][i])) X.set(i, j, cols[j][i]);
        TruncBanach plain = TruncBanach::unweighted(std::vector<std::string>(n, ""));
        xs_ = std::make_unique<WeightedSmith>(BoundedMap(plain, plain, std::move(X)), p);
        kdim_ = static_cast<int>(kb.size());
    }

    /// v must lie in the kernel; returns its kernel-basis coordinates.
    std::vector<Rational> coords(const std::vector<Rational>& v) const {
        auto sol = xs_->solve(v);
        if (!sol) throw std::logic_error("KernelCoords: vector not expressible");
        std::vector<Rational> out(kdim_, Rational(0));
        for (size_t j = 0; j < which_.size(); ++j) {
            if (which_[j] >= 0)
                out[which_[j]] = sol->x[j];
            else if (!is_zero(sol->x[j]))
                throw std::logic_error("KernelCoords: vector not in the kernel");
        }
        return out;
    }

  private:
    std::unique_ptr<WeightedSmith> xs_;
    std::vector<int> which_;
    int kdim_ = 0;
};

inline LeftHeartObject cohomology(const Complex& C, int j, unsigned long p) {
    const TruncBanach& V = C.space(j);
    BoundedMap din = C.has_diff(j - 1)
                         ? C.diff(j - 1)
                         : BoundedMap::zero(TruncBanach{}, V);
    BoundedMap dout = C.has_diff(j)
                          ? C.diff(j)
                          : BoundedMap::zero(V, TruncBanach{});

    WeightedSmith s_out(dout, p);
    WeightedSmith s_in(din, p);

    LeftHeartObject H;
    H.ker_basis = s_out.kernel_basis();
    {
        std::vector<std::string> lbl;
        std::vector<Rational> wt;
        for (size_t k = 0; k < H.ker_basis.size(); ++k) {
            lbl.push_back("k" + std::to_string(k));
            LogNorm nrm = V.norm(H.ker_basis[k], p);
            wt.push_back(nrm.is_neg_inf() ? Rational(0) : nrm.v);
        }
        H.ker = TruncBanach(std::move(lbl), std::move(wt));
    }
    H.coim_basis = s_in.coimage_basis();
    {
        std::vector<std::string> lbl;
        std::vector<Rational> wt;
        for (int k = 0; k < s_in.rank(); ++k) {
            lbl.push_back("c" + std::to_string(k));
            wt.push_back(s_in.coimage_weight(k));
        }
        H.coim = TruncBanach(std::move(lbl), std::move(wt));
    }
    H.inclusion = QMatrix(H.ker.dim(), H.coim.dim());
    KernelCoords kc(s_out, p);
    for (int k = 0; k < H.coim.dim(); ++k) {
        auto img = din.A.apply(H.coim_basis[k]);
        auto y = kc.coords(img);
        for (int i = 0; i < H.ker.dim(); ++i)
            if (!is_zero(y[i])) H.inclusion.set(i, k, y[i]);
    }
    // classical part = coker(inclusion), quotient weights
    {
        WeightedSmith si(BoundedMap(H.coim, H.ker, H.inclusion), p);
        if (si.rank() != H.coim.dim()) throw std::logic_error("cohomology: coim -> ker not injective");
        std::vector<std::string> lbl;
        std::vector<Rational> wt;
        for (auto& [i, q] : si.cokernel_weights()) {
            lbl.push_back("h" + std::to_string(i));
            wt.push_back(q);
        }
        H.classical_part = TruncBanach(std::move(lbl), std::move(wt));
    }
    return H;
}

/// Per-cap minimal preimage-norm profiles for a morphism computed along a
/// ladder of truncation caps, with a stabilization verdict.
struct StrictnessReport {
    std::string op;
    std::vector<long> caps;
    std::vector<std::vector<LogNorm>> profiles;  // per cap, per target basis vector in image
    std::vector<LogNorm> profile_max;            // per cap
    std::string verdict;                          // STRICT | NON-STRICT

    bool strict() const { return verdict == "STRICT"; }
};

inline StrictnessReport strictness_report(const std::vector<BoundedMap>& ladder,
                                          const std::vector<long>& caps, unsigned long p,
                                          const std::string& op_name = "map") {
    if (ladder.empty()) throw std::invalid_argument("strictness_report: empty ladder");
    StrictnessReport rep;
    rep.op = op_name;
    rep.caps = caps;
    for (auto& f : ladder) {
        WeightedSmith sm(f, p);
        std::vector<LogNorm> prof;
        LogNorm pmax = LogNorm::neg_inf();
        for (int i = 0; i < f.tgt.dim(); ++i) {
            std::vector<Rational> e(f.tgt.dim(), Rational(0));
            e[i] = 1;
            auto sol = sm.solve(e);
            if (!sol) continue;  // only target vectors in the image
            LogNorm cost = sol->norm - f.tgt.w[i];  // preimage norm per unit target norm
            prof.push_back(cost);
            pmax = max(pmax, cost);
        }
        rep.profiles.push_back(std::move(prof));
        rep.profile_max.push_back(pmax);
    }
    size_t n = rep.profile_max.size();
    bool stabilized = n < 2 || rep.profile_max[n - 1] == rep.profile_max[n - 2];
    rep.verdict = stabilized ? "STRICT" : "NON-STRICT";
    return rep;
}

/// TRUE when the class of the target vector in coker(f) vanishes from some
/// ladder stage onward.
inline bool limit_cokernel_class(const std::vector<BoundedMap>& ladder,
                                 const std::vector<std::vector<Rational>>& targets,
                                 unsigned long p) {
    if (ladder.size() != targets.size() || ladder.empty())
        throw std::invalid_argument("limit_cokernel_class: ladder/target mismatch");
    std::vector<bool> hit;
    for (size_t k = 0; k < ladder.size(); ++k) {
        WeightedSmith sm(ladder[k], p);
        hit.push_back(sm.solve(targets[k]).has_value());
    }
    // vanishes in the limit iff solvable from the first solvable stage on
    auto first = std::find(hit.begin(), hit.end(), true);
    if (first == hit.end()) return false;
    return std::all_of(first, hit.end(), [](bool b) { return b; });
}

// ---------------------------------------------------------------------------
// Čech complex for the two-element covering of the closed unit disk:
// U1 = {|x| <= |p|}, U2 = {|p| <= |x| <= 1}, overlap the circle |x| = |p|.
// ---------------------------------------------------------------------------

enum class DiskCover { two_cover };

struct CechSpaces {
    // basis layout (per sheaf rank component):
    // U1: x^j, j in [0, D], weight -j
    // U2: x^j, j in [-D, D], weight -j for j < 0, 0 otherwise
    // overlap: x^j, j in [-D, D], weight -j
    int D;
    int rank;
    int u1_dim() const { return (D + 1) * rank; }
    int u2_dim() const { return (2 * D + 1) * rank; }
    int ov_dim() const { return (2 * D + 1) * rank; }
};

inline Complex cech_complex(DiskCover cover, int D, int rank = 1) {
    if (cover != DiskCover::two_cover) throw std::invalid_argument("cech_complex: unsupported covering");
    if (rank < 1) throw std::invalid_argument("cech_complex: rank >= 1 required");
    CechSpaces sp{D, rank};

    std::vector<std::string> lbl0;
    std::vector<Rational> w0;
    for (int r = 0; r < rank; ++r)
        for (int j = 0; j <= D; ++j) {
            lbl0.push_back("U1:x^" + std::to_string(j) + (rank > 1 ? ":e" + std::to_string(r) : ""));
            w0.push_back(Rational(-j));
        }
    for (int r = 0; r < rank; ++r)
        for (int j = -D; j <= D; ++j) {
            lbl0.push_back("U2:x^" + std::to_string(j) + (rank > 1 ? ":e" + std::to_string(r) : ""));
            w0.push_back(j < 0 ? Rational(-j) : Rational(0));
        }
    TruncBanach C0(lbl0, w0);

    std::vector<std::string> lbl1;
    std::vector<Rational> w1;
    for (int r = 0; r < rank; ++r)
        for (int j = -D; j <= D; ++j) {
            lbl1.push_back("U12:x^" + std::to_string(j) + (rank > 1 ? ":e" + std::to_string(r) : ""));
            w1.push_back(Rational(-j));
        }
    TruncBanach C1(lbl1, w1);

    // d0(f1, f2) = f1|_ov - f2|_ov (signed restriction sum)
    QMatrix d0(C1.dim(), C0.dim());
    for (int r = 0; r < rank; ++r) {
        int ov_off = r * (2 * D + 1);
        int u1_off = r * (D + 1);
        int u2_off = sp.u1_dim() + r * (2 * D + 1);
        for (int j = 0; j <= D; ++j) d0.set(ov_off + (j + D), u1_off + j, Rational(1));
        for (int j = -D; j <= D; ++j) d0.add_to(ov_off + (j + D), u2_off + (j + D), Rational(-1));
    }

    Complex C;
    C.lo = 0;
    C.spaces = {C0, C1};
    C.diffs = {BoundedMap(C0, C1, d0)};
    return C;
}

/// Equalizer defect of a candidate 0-cochain: zero iff the pair glues.
inline LaurentWindow cech_glue_defect(const TateSeries& f1, const LaurentWindow& f2) {
    LaurentWindow r(f2.cap, 1);
    for (auto& [a, q] : f1.c) r.set(static_cast<long>(a.e[0]), q);
    return r - f2;
}

}  // namespace dcap
