#pragma once

#include <json.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcap/functors.hpp"
#include "dcap/parse.hpp"
#include "dcap/sample.hpp"
#include "dcap/tower.hpp"

namespace dcap {

using Json = nlohmann::json;

struct UnknownOperation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& known_operations() {
    static const std::vector<std::string> ops = {"cech_disk", "coadmissible", "commutator", "derham",
                                                 "dual",      "f_shriek",     "i_nat",      "i_plus",
                                                 "roos",      "spencer",      "tensor"};
    return ops;
}

struct Scenario {
    std::string op;
    GlobalField field;
    std::vector<long> ladder;
    Json params;  // operation inputs
    Json raw;     // verbatim echo
};

inline Scenario load_scenario(const Json& j) {
    if (!j.is_object() || !j.contains("op") || !j.at("op").is_string())
        throw ParseError("scenario: object with a string \"op\" field required");
    Scenario s;
    s.raw = j;
    s.op = j.at("op").get<std::string>();
    unsigned long p = 5;
    int deg = 32, op_cap = 16, levels = 4;
    s.ladder = {32, 64, 128};
    if (j.contains("caps")) {
        const Json& c = j.at("caps");
        if (!c.is_object()) throw ParseError("scenario: \"caps\" must be an object");
        p = c.value("p", p);
        deg = c.value("deg", deg);
        op_cap = c.value("op", op_cap);
        levels = c.value("levels", levels);
        if (c.contains("ladder")) s.ladder = c.at("ladder").get<std::vector<long>>();
    }
    try {
        s.field = GlobalField(p, deg, op_cap, levels);
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("scenario caps: ") + e.what());
    }
    if (s.ladder.empty()) throw ParseError("scenario: ladder must be non-empty");
    for (size_t k = 0; k + 1 < s.ladder.size(); ++k)
        if (!(s.ladder[k] < s.ladder[k + 1])) throw ParseError("scenario: ladder must be strictly increasing");
    for (long c : s.ladder)
        if (c < 1) throw ParseError("scenario: ladder caps must be positive");
    s.params = j.value("params", Json::object());
    return s;
}

/// Schema diagnostics without running anything.
inline std::vector<std::string> validate_scenario(const Json& j) {
    std::vector<std::string> diags;
    try {
        Scenario s = load_scenario(j);
        const auto& ops = known_operations();
        if (std::find(ops.begin(), ops.end(), s.op) == ops.end()) {
            std::string msg = "unknown operation \"" + s.op + "\"; allowed:";
            for (auto& o : ops) msg += " " + o;
            diags.push_back(msg);
        }
    } catch (const ParseError& e) {
        diags.push_back(e.what());
    }
    return diags;
}

// ---------------------------------------------------------------------------
// serialization helpers
// ---------------------------------------------------------------------------

inline Json series_json(const TateSeries& f) {
    Json out = Json::array();
    for (auto& [a, q] : f.c) out.push_back(Json{{"e", a.e}, {"c", rational_str(q)}});
    return out;
}

inline Json lognorm_json(const LogNorm& n) { return n.str(); }

inline Json strictness_json(const StrictnessReport& r) {
    Json pm = Json::array();
    for (auto& n : r.profile_max) pm.push_back(n.str());
    return Json{{"op", r.op}, {"caps", r.caps}, {"profile_max", pm}, {"verdict", r.verdict}};
}

inline ConnectionModule module_from_json(const Json& j, const GlobalField& K) {
    if (!j.is_object()) throw ParseError("module: object required");
    int m = j.value("vars", 1);
    int r = j.value("rank", 1);
    if (m < 1 || m > 2 || r < 1) throw ParseError("module: vars in {1,2} and rank >= 1 required");
    if (!j.contains("theta")) return ConnectionModule::trivial(m, r, K.deg_cap);
    const Json& T = j.at("theta");
    auto matrix = [&](const Json& mat) {
        if (!mat.is_array() || static_cast<int>(mat.size()) != r) throw ParseError("module: theta shape");
        SeriesMat s(r, r, m, K.deg_cap);
        for (int i = 0; i < r; ++i) {
            if (!mat[i].is_array() || static_cast<int>(mat[i].size()) != r) throw ParseError("module: theta shape");
            for (int c = 0; c < r; ++c) s.at(i, c) = parse_series(mat[i][c].get<std::string>(), m, K.deg_cap);
        }
        return s;
    };
    std::vector<SeriesMat> th;
    bool single = m == 1 && T.is_array() && !T.empty() && T[0].is_array() && !T[0].empty() && T[0][0].is_string();
    if (single) {
        th.push_back(matrix(T));
    } else {
        if (!T.is_array() || static_cast<int>(T.size()) != m)
            throw ParseError("module: theta must hold one matrix per variable");
        for (int i = 0; i < m; ++i) th.push_back(matrix(T[i]));
    }
    try {
        return ConnectionModule(m, r, K.deg_cap, std::move(th));
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("module: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// operation handlers
// ---------------------------------------------------------------------------

namespace handlers {

inline void derham(const Scenario& s, Json& results, Json& out) {
    // several modules at once: report flat-section counts per module
    if (s.params.contains("modules")) {
        Json per = Json::array();
        bool pass = true;
        std::vector<int> expect = s.params.value("expect_bounded", std::vector<int>{});
        const Json& mods = s.params.at("modules");
        for (size_t k = 0; k < mods.size(); ++k) {
            ConnectionModule M = module_from_json(mods[k], s.field);
            PushforwardReport rep = derham_pushforward_point(M, s.field, s.ladder);
            per.push_back(Json{{"lowest_kernel_dims", rep.lowest_kernel_dims},
                               {"bounded_kernel_dim", rep.bounded_kernel_dim}});
            if (k < expect.size()) pass = pass && rep.bounded_kernel_dim == expect[k];
        }
        results["per_module"] = per;
        out["profile"] = per;
        out["verdict"] = pass ? "PASS" : "FAIL";
        out["certificate"] = Json{{"modules", mods.size()}};
        return;
    }
    ConnectionModule M = s.params.contains("module") ? module_from_json(s.params.at("module"), s.field)
                                                     : ConnectionModule::trivial(1, 1, s.field.deg_cap);
    PushforwardReport rep = derham_pushforward_point(M, s.field, s.ladder);
    Json kd = Json::array(), cd = Json::array();
    for (auto& H : rep.H) {
        kd.push_back(H.kernel_dim());
        cd.push_back(H.classical_dim());
    }
    results["degrees"] = Json{{"lo", -rep.m}, {"hi", 0}};
    results["kernel_dims"] = kd;
    results["classical_dims"] = cd;
    results["lowest_kernel_dims"] = rep.lowest_kernel_dims;
    results["bounded_kernel_dim"] = rep.bounded_kernel_dim;
    Json st = Json::array();
    for (auto& r : rep.strictness) st.push_back(strictness_json(r));
    results["strictness"] = st;
    if (M.m == 1 && M.rank == 1 && s.params.value("test_forms", true)) {
        long top = s.ladder.back();
        std::vector<TateSeries> forms;
        for (uint32_t jdx = 0; jdx <= 10; ++jdx)
            forms.push_back(TateSeries::monomial(1, static_cast<int>(top), MultiIndex({jdx}), Rational(1)));
        results["limit_cokernel_top"] = derham_limit_cokernel_batch(M, s.field, s.ladder, 0, forms);
        results["limit_cokernel_lowest_constant"] = derham_limit_cokernel(
            M, s.field, s.ladder, -1, TateSeries::constant(1, static_cast<int>(top), Rational(1)));
    }
    Json prof = Json::array();
    for (auto& n : rep.strictness[0].profile_max) prof.push_back(n.str());
    out["profile"] = prof;
    out["verdict"] = rep.strictness[0].verdict;
    out["certificate"] = Json{{"bounded_kernel_dim", rep.bounded_kernel_dim},
                              {"lowest_kernel_dims", rep.lowest_kernel_dims}};
}

inline void cech_disk(const Scenario& s, Json& results, Json& out) {
    int D = s.params.value("D", s.field.deg_cap);
    int rank = s.params.value("rank", 1);
    Complex C = cech_complex(DiskCover::two_cover, D, rank);
    LeftHeartObject H0 = cohomology(C, 0, s.field.p);
    LeftHeartObject H1 = cohomology(C, 1, s.field.p);
    bool splits = true;
    for (long j = -D; j <= D && splits; ++j) {
        LaurentWindow h(D, 1);
        h.set(j, Rational(1));
        auto [f, g] = laurent_split(h);
        splits = cech_glue_defect(f, g) == h;
    }
    results["h0_dim"] = H0.kernel_dim();
    results["h1_dim"] = H1.classical_dim();
    results["expected_h0"] = (D + 1) * rank;
    results["splits"] = splits;
    bool pass = H0.kernel_dim() == (D + 1) * rank && H1.classical_dim() == 0 && splits;
    out["verdict"] = pass ? "PASS" : "FAIL";
    out["profile"] = Json::array({H0.kernel_dim(), H1.classical_dim()});
    out["certificate"] = Json{{"d0_rank", C.spaces[1].dim() - H1.classical_dim()}};
}

inline void i_plus(const Scenario& s, Json& results, Json& out) {
    std::vector<int> dims = s.params.value("fiber_dims", std::vector<int>{0, 1, 2, 3});
    std::vector<int> caps = s.params.value("dcaps", std::vector<int>{8, 16, 32});
    bool all = true;
    Json grid = Json::array();
    for (int r : dims)
        for (int c : caps) {
            bool ok = kashiwara_roundtrip(r, c, s.field.p);
            all = all && ok;
            grid.push_back(Json{{"fiber_dim", r}, {"dcap", c}, {"roundtrip", ok ? "PASS" : "FAIL"}});
        }
    results["roundtrips"] = grid;
    // the inverse direction on an ambient connection module sees no support
    int rd = kashiwara_restrict(ConnectionModule::trivial(1, 1, s.field.deg_cap), s.field).dim;
    results["connection_restrict_dim"] = rd;
    all = all && rd == 0;
    out["verdict"] = all ? "PASS" : "FAIL";
    out["profile"] = Json::array();
    out["certificate"] = Json{{"cases", static_cast<int>(grid.size())}};
}

inline void i_nat(const Scenario& s, Json& results, Json& out) {
    ConnectionModule M = s.params.contains("module") ? module_from_json(s.params.at("module"), s.field)
                                                     : ConnectionModule::trivial(1, 1, s.field.deg_cap);
    FiberModule F = kashiwara_restrict(M, s.field);
    results["restricted_dim"] = F.dim;
    out["verdict"] = F.dim == 0 ? "PASS" : "FAIL";
    out["profile"] = Json::array({F.dim});
    out["certificate"] = Json{{"ambient_rank", M.rank}};
}

inline void f_shriek(const Scenario& s, Json& results, Json& out) {
    ConnectionModule M = s.params.contains("module") ? module_from_json(s.params.at("module"), s.field)
                                                     : ConnectionModule::trivial(1, 1, s.field.deg_cap);
    std::string target = s.params.value("target", std::string("point"));
    if (target == "projection") {
        ShiftedModule lift = shriek_pullback_projection(M);
        results["shift"] = lift.shift;
        results["theta_x_zero"] = lift.module.theta[0].is_zero();
        out["verdict"] = lift.module.theta[0].is_zero() ? "PASS" : "FAIL";
        out["profile"] = Json::array({lift.shift});
        out["certificate"] = Json{{"vars", lift.module.m}};
        return;
    }
    std::vector<Rational> c;
    for (auto& v : s.params.value("point", std::vector<std::string>{"0"})) c.push_back(parse_rational(v));
    ShriekPointReport rep = shriek_pullback_point(c, M, s.field.p);
    results["shift"] = rep.shift;
    results["h_dims"] = rep.h_dims;
    bool pass = rep.h_dims.back() == M.rank;
    for (size_t k = 0; k + 1 < rep.h_dims.size(); ++k) pass = pass && rep.h_dims[k] == 0;
    out["verdict"] = pass ? "PASS" : "FAIL";
    out["profile"] = rep.h_dims;
    out["certificate"] = Json{{"shift", rep.shift}};
}

inline void dual(const Scenario& s, Json& results, Json& out) {
    int level = s.params.value("level", 2);
    if (s.params.contains("module")) {
        ConnectionModule M = module_from_json(s.params.at("module"), s.field);
        DualReport rep = dual_rank1(M, level, s.field);
        results["dual_form"] = series_json(rep.dual.theta[0].at(0, 0));
        results["kernel_zero"] = rep.kernel_zero;
        results["matches_o_dual"] = rep.matches_o_dual;
        results["biduality"] = rep.biduality;
        out["verdict"] = rep.pass ? "PASS" : "FAIL";
        out["profile"] = Json::array();
        out["certificate"] = Json{{"level", level}};
        return;
    }
    // sampled run: duality and side-changing round trips on random modules
    int samples = s.params.value("samples", 20);
    auto rng = seeded_rng();
    int ok = 0;
    bool side = true;
    for (int t = 0; t < samples; ++t) {
        TateSeries a = random_series(rng, s.field.p, 1, s.field.deg_cap, 3, 3);
        ConnectionModule M = ConnectionModule::rank1(1, s.field.deg_cap, {a});
        DualReport rep = dual_rank1(M, level, s.field);
        if (rep.pass && dual_rank1(rep.dual, level, s.field).dual.theta[0] == M.theta[0]) ++ok;
        ConnectionModule back = side_change_inv(side_change(M));
        side = side && back.theta[0] == M.theta[0];
    }
    results["samples"] = samples;
    results["pass_count"] = ok;
    results["side_change_roundtrip"] = side;
    out["verdict"] = (ok == samples && side) ? "PASS" : "FAIL";
    out["profile"] = Json::array({ok, samples});
    out["certificate"] = Json{{"level", level}};
}

inline void spencer(const Scenario& s, Json& results, Json& out) {
    std::vector<int> ms = {1};
    if (s.params.contains("m")) {
        if (s.params.at("m").is_array())
            ms = s.params.at("m").get<std::vector<int>>();
        else
            ms = {s.params.at("m").get<int>()};
    }
    int level = s.params.value("level", 1);
    bool pass = true;
    Json per = Json::array();
    for (int m : ms) {
        SpencerComplex full = spencer_complex(s.field, m, level);
        bool zero_comp = true;
        try {
            full.complex.validate();
        } catch (const std::logic_error&) {
            zero_comp = false;
        }
        // exactness on the x-degree-zero strand; ranks of the full complex
        // are these times the number of x-monomials
        SpencerComplex fac = spencer_factor_complex(s.field, m, level);
        std::vector<int> dims, ranks;
        for (auto& sp : fac.complex.spaces) dims.push_back(sp.dim());
        for (auto& d : fac.complex.diffs) ranks.push_back(WeightedSmith(d, s.field.p).rank());
        bool exact = ranks[0] == dims[0];  // leftmost injective
        for (size_t k = 1; k + 1 < fac.complex.spaces.size(); ++k)
            exact = exact && ranks[k - 1] + ranks[k] == dims[k];
        exact = exact && ranks.back() == dims.back();  // augmentation surjective
        long nx = static_cast<long>(DnBasis::enumerate(m, s.field.deg_cap).size());
        Json fd = Json::array();
        for (auto& sp : full.complex.spaces) fd.push_back(sp.dim());
        bool multiplies = true;
        for (size_t k = 0; k < dims.size(); ++k)
            multiplies = multiplies && full.complex.spaces[k].dim() == nx * dims[k];
        pass = pass && zero_comp && exact && multiplies;
        per.push_back(Json{{"m", m},
                           {"factor_dims", dims},
                           {"factor_ranks", ranks},
                           {"full_dims", fd},
                           {"zero_composition", zero_comp},
                           {"exact", exact},
                           {"dims_multiply", multiplies},
                           {"x_monomials", nx}});
    }
    results["per_m"] = per;
    out["verdict"] = pass ? "PASS" : "FAIL";
    out["profile"] = Json(ms);
    out["certificate"] = Json{{"level", level}};
}

inline InverseSystem level_tower(int stages, int dim, unsigned long p) {
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
    (void)p;
    PrenuclearWitness w;
    w.base.assign(stages, Rational(0));
    w.slope.assign(stages, Rational(1));
    S.witness = w;
    return S;
}

inline void roos(const Scenario& s, Json& results, Json& out) {
    int stages = s.params.value("stages", 6);
    int dim = s.params.value("dim", 33);
    InverseSystem S = level_tower(stages, dim, s.field.p);
    int N = stages - 1;
    BoundedBall B;
    B.radius.assign(stages, LogNorm::of(Rational(0)));
    std::vector<std::vector<Rational>> target;
    for (int i = 0; i < N; ++i) {
        std::vector<Rational> t(dim, Rational(0));
        for (int j = 0; j < dim; ++j) t[j] = pow_p(s.field.p, static_cast<long>(i) * j);
        target.push_back(std::move(t));
    }
    RoosPreimage r = roos_preimage(S, target, B, s.field.p);
    bool equations = true;
    for (int i = 0; i < N && equations; ++i) {
        auto img = S.rho[i].A.apply(r.y[i + 1]);
        for (int k = 0; k < dim; ++k)
            if (r.y[i][k] - img[k] != target[i][k]) equations = false;
    }
    PrenuclearVerdict pv = prenuclear_check(S, {B}, s.field.p);
    InverseSystem bad = S;
    bad.witness->slope.assign(stages, Rational(0));
    bad.witness->base.assign(stages, Rational(0));
    PrenuclearVerdict bv = prenuclear_check(bad, {B}, s.field.p);
    Json an = Json::array(), cn = Json::array();
    for (auto& n : r.actual_norm) an.push_back(n.str());
    for (auto& n : r.certificate) cn.push_back(n.str());
    results["actual_norms"] = an;
    results["certificate_norms"] = cn;
    results["equations_exact"] = equations;
    results["certified"] = r.certified;
    results["prenuclear"] = pv.str();
    results["violation"] = bv.str();
    bool pass = equations && r.certified && pv.pass && !bv.pass;
    out["verdict"] = pass ? "PASS" : "FAIL";
    out["profile"] = an;
    out["certificate"] = cn;
}

inline void commutator(const Scenario& s, Json& results, Json& out) {
    int samples = s.params.value("samples", 50);
    int coord = s.params.value("coord", 1) - 1;
    int level = s.params.value("level", 2);
    auto rng = seeded_rng();
    int m = s.params.value("vars", 1);
    int ok = 0;
    LogNorm worst_gap = LogNorm::neg_inf();
    for (int t = 0; t < samples; ++t) {
        DiffOp P = s.params.contains("operator")
                       ? parse_operator(s.params.at("operator").get<std::string>(), m, s.field.op_cap,
                                        s.field.deg_cap)
                       : random_operator(rng, s.field.p, m, s.field.op_cap, s.field.deg_cap, 4, 3);
        CommutatorPreimage cp = commutator_preimage(P, coord, level, s.field.p);
        DiffOp y = DiffOp::coordinate(m, cp.C.op_cap, cp.C.deg_cap, coord);
        DiffOp Pc(m, cp.C.op_cap, cp.C.deg_cap);
        for (auto& [a, f] : P.t) Pc.set(a, f);
        bool exact = op_mul(cp.C, y) - op_mul(y, cp.C) == Pc;
        LogNorm cn = op_level_norm(cp.C, level - 1, s.field.p);
        bool bounded = cn <= cp.certified_bound;
        if (exact && bounded) ++ok;
        worst_gap = max(worst_gap, cn);
    }
    results["samples"] = samples;
    results["reconstructed"] = ok;
    out["verdict"] = ok == samples ? "PASS" : "FAIL";
    out["profile"] = Json::array({ok, samples});
    out["certificate"] = Json{{"worst_level_norm", worst_gap.str()}};
}

inline void tensor(const Scenario& s, Json& results, Json& out) {
    int samples = s.params.value("samples", 20);
    auto rng = seeded_rng();
    bool adds = true, flat = true;
    for (int t = 0; t < samples; ++t) {
        TateSeries a = random_series(rng, s.field.p, 1, s.field.deg_cap, 4, 3);
        TateSeries b = random_series(rng, s.field.p, 1, s.field.deg_cap, 4, 3);
        ConnectionModule T = tensor_O(ConnectionModule::rank1(1, s.field.deg_cap, {a}),
                                      ConnectionModule::rank1(1, s.field.deg_cap, {b}));
        adds = adds && T.theta[0].at(0, 0) == a + b;
    }
    for (int t = 0; t < samples; ++t) {
        try {
            ConnectionModule M = random_flat_rank2(rng, s.field.p, 2, 8);
            ConnectionModule N = random_flat_rank2(rng, s.field.p, 2, 8);
            flat = flat && tensor_O(M, N).rank == 4;  // ctor re-verifies flatness
        } catch (const std::invalid_argument&) {
            flat = false;
        }
    }
    results["forms_add"] = adds;
    results["flatness_preserved"] = flat;
    out["verdict"] = (adds && flat) ? "PASS" : "FAIL";
    out["profile"] = Json::array({samples});
    out["certificate"] = Json::object();
}

inline void coadmissible(const Scenario& s, Json& results, Json& out) {
    int top = s.params.value("top_level", 4);
    auto rng = seeded_rng();
    int cap = std::min(s.field.deg_cap, 10);

    ConnectionModule M = s.params.contains("module") ? module_from_json(s.params.at("module"), s.field)
                                                     : random_flat_rank2(rng, s.field.p, 2, cap);
    std::vector<LevelPresentation> ct;
    for (int n = top; n >= 0; --n) ct.push_back(LevelPresentation::of_connection(M, n));
    std::vector<DiffOp> cs;
    for (int t = 0; t < 3; ++t) cs.push_back(random_operator(rng, s.field.p, M.m, 6, M.cap, 2, 2));
    TowerVerdict conn = coadmissibility_check(ct, cs);

    DiffOp P = s.params.contains("cyclic")
                   ? parse_operator(s.params.at("cyclic").get<std::string>(), 1, s.field.op_cap, cap)
                   : [&] {
                         DiffOp q(1, s.field.op_cap, cap);
                         q.set(MultiIndex({1}), TateSeries::constant(1, cap, Rational(1)));
                         q.set(MultiIndex({0}), random_series(rng, s.field.p, 1, cap, 3, 2));
                         return q;
                     }();
    std::vector<LevelPresentation> cyc;
    for (int n = top; n >= 0; --n) cyc.push_back(LevelPresentation::of_cyclic(P, n));
    std::vector<DiffOp> ops1;
    for (int t = 0; t < 3; ++t) ops1.push_back(random_operator(rng, s.field.p, 1, 6, cap, 3, 2));
    TowerVerdict cyv = coadmissibility_check(cyc, ops1);

    int pstage = s.params.value("perturb_stage", 2);
    DiffOp P2 = P;
    P2.add_to(MultiIndex({0}), TateSeries::constant(1, cap, Rational(1)));
    cyc[pstage] = LevelPresentation::of_cyclic(P2, top - pstage);
    TowerVerdict bad = coadmissibility_check(cyc, ops1);

    results["connection_tower"] = conn.str();
    results["cyclic_tower"] = cyv.str();
    results["perturbed_tower"] = bad.str();
    bool pass = conn.pass && cyv.pass && !bad.pass && bad.stage == pstage;
    out["verdict"] = pass ? "PASS" : "FAIL";
    out["profile"] = Json::array({top + 1});
    out["certificate"] = Json{{"perturb_stage", pstage}, {"fail_stage", bad.stage}};
}

}  // namespace handlers

/// Executes the scenario and returns the deterministic report.
inline Json run_scenario(const Scenario& s) {
    const auto& ops = known_operations();
    if (std::find(ops.begin(), ops.end(), s.op) == ops.end()) {
        std::string msg = "unknown operation \"" + s.op + "\"; allowed:";
        for (auto& o : ops) msg += " " + o;
        throw UnknownOperation(msg);
    }
    Json out;
    out["op"] = s.op;
    out["scenario"] = s.raw;
    out["caps"] = Json{{"p", s.field.p},
                       {"deg", s.field.deg_cap},
                       {"op", s.field.op_cap},
                       {"levels", s.field.max_level},
                       {"ladder", s.ladder}};
    Json results = Json::object();
    if (s.op == "derham")
        handlers::derham(s, results, out);
    else if (s.op == "cech_disk")
        handlers::cech_disk(s, results, out);
    else if (s.op == "i_plus")
        handlers::i_plus(s, results, out);
    else if (s.op == "i_nat")
        handlers::i_nat(s, results, out);
    else if (s.op == "f_shriek")
        handlers::f_shriek(s, results, out);
    else if (s.op == "dual")
        handlers::dual(s, results, out);
    else if (s.op == "spencer")
        handlers::spencer(s, results, out);
    else if (s.op == "roos")
        handlers::roos(s, results, out);
    else if (s.op == "commutator")
        handlers::commutator(s, results, out);
    else if (s.op == "tensor")
        handlers::tensor(s, results, out);
    else if (s.op == "coadmissible")
        handlers::coadmissible(s, results, out);
    out["results"] = results;
    return out;
}

}  // namespace dcap
