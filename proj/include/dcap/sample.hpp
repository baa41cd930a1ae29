#pragma once

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "dcap/dmods.hpp"

namespace dcap {

/// Deterministic generator; the DCAP_SEED environment variable overrides
/// the default, so sampled property checks are reproducible.
inline std::mt19937_64 seeded_rng() {
    unsigned long long seed = 0x5eed2026ULL;
    if (const char* env = std::getenv("DCAP_SEED")) seed = std::strtoull(env, nullptr, 10);
    return std::mt19937_64(seed);
}

/// Random unit times a power of p in [min_e, max_e].
inline Rational random_rational(std::mt19937_64& rng, unsigned long p, int min_e = -3, int max_e = 3) {
    std::uniform_int_distribution<long> unit(1, 40);
    std::uniform_int_distribution<int> exp(min_e, max_e);
    long a = unit(rng), b = unit(rng);
    while (a % static_cast<long>(p) == 0) ++a;
    while (b % static_cast<long>(p) == 0) ++b;
    std::uniform_int_distribution<int> sign(0, 1);
    Rational q(sign(rng) ? a : -a, b);
    q.canonicalize();
    return q * pow_p(p, exp(rng));
}

inline TateSeries random_series(std::mt19937_64& rng, unsigned long p, int m, int cap, int max_deg, int terms) {
    TateSeries f(m, cap);
    std::uniform_int_distribution<int> deg(0, max_deg);
    for (int t = 0; t < terms; ++t) {
        std::vector<uint32_t> e(m, 0);
        int budget = deg(rng);
        for (int i = 0; i < m && budget > 0; ++i) {
            std::uniform_int_distribution<int> part(0, budget);
            int d = part(rng);
            e[i] = static_cast<uint32_t>(d);
            budget -= d;
        }
        f.add_to(MultiIndex(e), random_rational(rng, p));
    }
    return f;
}

/// Flat rank-2 connection: Theta_i = (d_i g) C for a scalar potential g and
/// a constant matrix C, so the curvature cancels term by term.
inline ConnectionModule random_flat_rank2(std::mt19937_64& rng, unsigned long p, int m, int cap) {
    TateSeries g = random_series(rng, p, m, cap, 3, 4);
    SeriesMat C(2, 2, m, cap);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) C.at(i, j) = TateSeries::constant(m, cap, random_rational(rng, p, -1, 1));
    std::vector<SeriesMat> th;
    for (int i = 0; i < m; ++i) {
        TateSeries dg = derive(g, i);
        SeriesMat t(2, 2, m, cap);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) t.at(r, c) = series_mul(dg, C.at(r, c));
        th.push_back(std::move(t));
    }
    return ConnectionModule(m, 2, cap, std::move(th));
}

inline DiffOp random_operator(std::mt19937_64& rng, unsigned long p, int m, int op_cap, int deg_cap,
                              int max_ord, int terms) {
    DiffOp P(m, op_cap, deg_cap);
    std::uniform_int_distribution<int> od(0, max_ord);
    for (int t = 0; t < terms; ++t) {
        std::vector<uint32_t> a(m, 0);
        int budget = od(rng);
        for (int i = 0; i < m && budget > 0; ++i) {
            std::uniform_int_distribution<int> part(0, budget);
            int d = part(rng);
            a[i] = static_cast<uint32_t>(d);
            budget -= d;
        }
        P.add_to(MultiIndex(a), random_series(rng, p, m, deg_cap, 2, 2));
    }
    return P;
}

}  // namespace dcap
