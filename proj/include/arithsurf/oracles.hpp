#pragma once

// Reference computations that avoid the stabilization, profile and lattice
// machinery. Used by the test suites and the acceptance run.

#include <cstdint>
#include <random>
#include <vector>

#include "arithsurf/delpezzo.hpp"
#include "arithsurf/graded.hpp"

namespace arithsurf::oracle {

// Transpose of phi: F^dual -> G^dual.
inline GradedMap dual_map(const GradedMap& phi) {
    FreeGraded src, tgt;
    for (int a : phi.target().twists) src.twists.push_back(-a);
    for (int b : phi.source().twists) tgt.twists.push_back(-b);
    GradedMap out(src, tgt);
    for (std::size_t i = 0; i < phi.rows(); ++i)
        for (std::size_t j = 0; j < phi.cols(); ++j) out.set(j, i, phi(i, j));
    return out;
}

inline std::size_t field_rank(const IntegerMatrix& m, const BaseRing& base) {
    return rank_over(m, base.kind == BaseRing::Kind::Integers ? BaseRing::rationals() : base);
}

// h^0(E(d)) for E = coker(phi) with phi injective, from
// 0 -> G -> F -> E -> 0 and Serre duality on the H^1 terms:
// dim F_d - rank phi_d + dim G^v_{-d-2} - rank phi^T_{-d-2}.
inline std::size_t global_sections(const GradedPresentation& pres, int d) {
    const GradedMap& phi = pres.relations;
    const std::size_t h0_part = phi.target().dim(d) - field_rank(degree_piece(phi, d), pres.base);
    const GradedMap dual = dual_map(phi);
    const std::size_t h1_kernel = dual.target().dim(-d - 2) - field_rank(degree_piece(dual, -d - 2), pres.base);
    return h0_part + h1_kernel;
}

// phi is injective on sheaves iff it is injective in one high degree.
inline bool injective(const GradedPresentation& pres) {
    int top = 0;
    for (int a : pres.generators().twists) top = std::max(top, std::abs(a));
    for (int b : pres.relation_twists().twists) top = std::max(top, std::abs(b));
    const int D = 2 * top + 8;
    return field_rank(degree_piece(pres.relations, D), pres.base) == pres.relation_twists().dim(D);
}

// Splitting type over a field: first twist with a section, then degree.
inline std::pair<long, long> rank_two_type(const GradedPresentation& pres, long degree, int lo = -60) {
    for (int d = lo; d <= 60; ++d)
        if (global_sections(pres, d) > 0) return {degree + d, -d};
    return {0, 0};
}

// (-1)-classes by exhaustive search over the box |d| <= dmax, |m_i| <= mmax.
inline std::size_t minus_one_count_box(std::size_t r, long dmax, long mmax) {
    std::size_t count = 0;
    std::vector<long> m(r, -mmax);
    for (long d = -dmax; d <= dmax; ++d) {
        std::fill(m.begin(), m.end(), -mmax);
        for (;;) {
            long sq = d * d, lin = 3 * d;
            for (long v : m) {
                sq -= v * v;
                lin -= v;
            }
            if (sq == -1 && lin == 1) ++count;
            std::size_t k = 0;
            while (k < r && m[k] == mmax) m[k++] = -mmax;
            if (k == r) break;
            ++m[k];
        }
    }
    return count;
}

// Reductions mod 2 contain a repeated point or a collinear triple.
inline bool mod2_degenerate(const PointConfiguration& c, const std::vector<std::size_t>& idx) {
    auto bit = [&](std::size_t i, std::size_t k) { return mpz_odd_p(c[idx[i]][k].get_mpz_t()) ? 1 : 0; };
    if (idx.size() == 2) {
        for (std::size_t k = 0; k < 3; ++k)
            if (bit(0, k) != bit(1, k)) return false;
        return true;
    }
    if (idx.size() == 3) {
        int s[3][3];
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < 3; ++k) s[i][k] = bit(i, k);
        const int det = s[0][0] * (s[1][1] * s[2][2] + s[1][2] * s[2][1]) + s[0][1] * (s[1][0] * s[2][2] + s[1][2] * s[2][0]) +
                        s[0][2] * (s[1][0] * s[2][1] + s[1][1] * s[2][0]);
        return det % 2 == 0;
    }
    return false;
}

inline Form random_form(std::mt19937_64& rng, int degree, long lo, long hi) {
    if (degree < 0) return Form::zero(degree);
    std::uniform_int_distribution<long> dist(lo, hi);
    std::vector<Integer> cs;
    for (int j = 0; j <= degree; ++j) cs.emplace_back(dist(rng));
    return Form::from_coeffs(std::move(cs));
}

}  // namespace arithsurf::oracle
