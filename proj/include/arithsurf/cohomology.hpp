#pragma once

// Sheaf cohomology of presented sheaves on P^1 over Z, Q or F_p.
//
// For M = coker(Phi) the sections of the sheafified module twisted by d are
// the limit over e of Hom((x0^e, x1^e), M)_d, i.e. pairs (u, v) in M_{d+e}
// with x1^e u = x0^e v. When Phi is injective, M_D already equals
// H^0(E(D)) once D >= -1 - (smallest relation twist), so the limit is
// attained from e = max(0, -1 - min relation twist - d) on. The scan starts
// there and stops at the first two consecutive e with equal dimension and an
// injective transition map (u, v) -> (x0 u, x1 v).

#include <algorithm>
#include <climits>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <vector>

#include "arithsurf/exactlat.hpp"
#include "arithsurf/graded.hpp"

namespace arithsurf {

namespace detail {

inline int min_or(const std::vector<int>& v, int fallback) {
    return v.empty() ? fallback : *std::min_element(v.begin(), v.end());
}
inline int max_or(const std::vector<int>& v, int fallback) {
    return v.empty() ? fallback : *std::max_element(v.begin(), v.end());
}

// Block-diagonal sum.
inline IntegerMatrix block_diagonal(const std::vector<const IntegerMatrix*>& blocks) {
    std::size_t rows = 0, cols = 0;
    for (const auto* b : blocks) {
        rows += b->rows();
        cols += b->cols();
    }
    IntegerMatrix out(rows, cols);
    std::size_t r0 = 0, c0 = 0;
    for (const auto* b : blocks) {
        for (std::size_t i = 0; i < b->rows(); ++i)
            for (std::size_t j = 0; j < b->cols(); ++j) out(r0 + i, c0 + j) = (*b)(i, j);
        r0 += b->rows();
        c0 += b->cols();
    }
    return out;
}

inline IntegerMatrix negated(IntegerMatrix m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
    return m;
}

// Rank in the field attached to the presentation (Z computes over Q).
inline std::size_t field_rank(const IntegerMatrix& m, const BaseRing& base) {
    return rank_over(m, base.kind == BaseRing::Kind::Integers ? BaseRing::rationals() : base);
}

}  // namespace detail

// Smallest twist D with M_D = H^0(E(D)) for injective presentations.
inline int saturation_twist(const GradedPresentation& pres) {
    const auto& rel = pres.relation_twists().twists;
    const auto& gen = pres.generators().twists;
    return std::max(-1 - detail::min_or(rel, INT_MAX / 4), -1 - detail::min_or(gen, INT_MAX / 4));
}

// Stabilization guard: 2 + max |twist|, overridable by ARITHSURF_WINDOW_GUARD.
inline int window_guard(const GradedPresentation& pres) {
    if (const char* env = std::getenv("ARITHSURF_WINDOW_GUARD")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 0) return static_cast<int>(v);
    }
    int m = 0;
    for (int a : pres.generators().twists) m = std::max(m, std::abs(a));
    for (int b : pres.relation_twists().twists) m = std::max(m, std::abs(b));
    return 2 + m;
}

// Dimension of M_D over the presentation's field.
inline std::size_t module_piece_dim(const GradedPresentation& pres, int D) {
    return pres.generators().dim(D) - detail::field_rank(degree_piece(pres.relations, D), pres.base);
}

// Matrices whose ranks determine dim Hom((x0^e, x1^e), M)_d:
// `hom` = [x1^e | -x0^e | -Phi_{D+e}] on F_D + F_D + G_{D+e}, and the
// relation pieces Phi_D, Phi_{D+e}, with D = d + e.
struct HomSystem {
    IntegerMatrix hom;
    IntegerMatrix relations_low;
    IntegerMatrix relations_high;
};

inline HomSystem hom_system(const GradedPresentation& pres, int d, int e) {
    const FreeGraded& gens = pres.generators();
    const int D = d + e;
    const IntegerMatrix a = scalar_multiplication_piece(gens, Form::x1_power(e), D);
    const IntegerMatrix b = detail::negated(scalar_multiplication_piece(gens, Form::x0_power(e), D));
    IntegerMatrix high = degree_piece(pres.relations, D + e);
    const IntegerMatrix c = detail::negated(high);
    return HomSystem{hstack({&a, &b, &c}, gens.dim(D + e)), degree_piece(pres.relations, D), std::move(high)};
}

inline std::size_t hom_dimension(const GradedPresentation& pres, int d, int e) {
    const HomSystem sys = hom_system(pres, d, e);
    const std::size_t dim_m = pres.generators().dim(d + e) - detail::field_rank(sys.relations_low, pres.base);
    const std::size_t rank_high = detail::field_rank(sys.relations_high, pres.base);
    const std::size_t map_rank = detail::field_rank(sys.hom, pres.base) - rank_high;
    return 2 * dim_m - map_rank;
}

// Dimension of the kernel of Hom_e -> Hom_{e+1}, (u, v) -> (x0 u, x1 v).
inline std::size_t transition_kernel_dimension(const GradedPresentation& pres, int d, int e) {
    const FreeGraded& gens = pres.generators();
    const int D = d + e;
    const IntegerMatrix x1e = scalar_multiplication_piece(gens, Form::x1_power(e), D);
    const IntegerMatrix x0e = detail::negated(scalar_multiplication_piece(gens, Form::x0_power(e), D));
    const IntegerMatrix x0 = scalar_multiplication_piece(gens, Form::x0_power(1), D);
    const IntegerMatrix x1 = scalar_multiplication_piece(gens, Form::x1_power(1), D);
    // rows: F_{D+e} | F_{D+1} | F_{D+1}; columns: u | v
    const std::size_t nd = gens.dim(D);
    IntegerMatrix left(gens.dim(D + e) + 2 * gens.dim(D + 1), 2 * nd);
    auto put = [&](const IntegerMatrix& blk, std::size_t r0, std::size_t c0) {
        for (std::size_t i = 0; i < blk.rows(); ++i)
            for (std::size_t j = 0; j < blk.cols(); ++j) left(r0 + i, c0 + j) = blk(i, j);
    };
    put(x1e, 0, 0);
    put(x0e, 0, nd);
    put(x0, gens.dim(D + e), 0);
    put(x1, gens.dim(D + e) + gens.dim(D + 1), nd);
    const IntegerMatrix r_high = degree_piece(pres.relations, D + e);
    const IntegerMatrix r_up = degree_piece(pres.relations, D + 1);
    const IntegerMatrix rel = detail::block_diagonal({&r_high, &r_up, &r_up});
    const IntegerMatrix full = hstack({&left, &rel}, left.rows());
    const std::size_t dim_m = gens.dim(D) - detail::field_rank(degree_piece(pres.relations, D), pres.base);
    const std::size_t map_rank = detail::field_rank(full, pres.base) - detail::field_rank(rel, pres.base);
    return 2 * dim_m - map_rank;
}

// First e of the stabilization scan for twist d.
inline int stabilization_start(const GradedPresentation& pres, int d) {
    if (pres.relation_twists().rank() == 0) return 0;
    return std::max(0, -1 - detail::min_or(pres.relation_twists().twists, 0) - d);
}

// Hard cap on e: start + (max generator twist - min relation twist) + 4.
inline int stabilization_cap(const GradedPresentation& pres, int d) {
    const int spread = detail::max_or(pres.generators().twists, 0) - detail::min_or(pres.relation_twists().twists, 0);
    return stabilization_start(pres, d) + std::max(0, spread) + 4;
}

struct H0Result {
    std::size_t dimension = 0;
    int stabilized_at = 0;  // the e at which two consecutive values agreed
};

inline H0Result h0(const GradedPresentation& pres, int d) {
    const int start = stabilization_start(pres, d);
    const int cap = stabilization_cap(pres, d);
    std::size_t prev = hom_dimension(pres, d, start);
    for (int e = start + 1; e <= cap; ++e) {
        const std::size_t cur = hom_dimension(pres, d, e);
        if (cur == prev && transition_kernel_dimension(pres, d, e - 1) == 0) return H0Result{cur, e};
        prev = cur;
    }
    throw WindowExhausted("h0 did not stabilize at twist " + std::to_string(d) + " within e <= " +
                          std::to_string(cap));
}

struct RankDegree {
    int rank = 0;
    long degree = 0;
};

// Rank and degree from the Hilbert function dim M_D = r (D + 1) + e at
// probe twists beyond every saturation bound.
inline RankDegree sheaf_rank_degree(const GradedPresentation& pres) {
    const int spread = std::max(0, detail::max_or(pres.generators().twists, 0) -
                                       detail::min_or(pres.relation_twists().twists, 0));
    const int D = saturation_twist(pres) + spread + 2;
    const long h_a = static_cast<long>(module_piece_dim(pres, D));
    const long h_b = static_cast<long>(module_piece_dim(pres, D + 1));
    const long h_c = static_cast<long>(module_piece_dim(pres, D + 2));
    const long r = h_b - h_a;
    if (h_c - h_b != r || r < 0)
        throw NotLocallyFree("Hilbert function is not of the form r(D+1)+e at the probe twists " + std::to_string(D) +
                             ".." + std::to_string(D + 2));
    return RankDegree{static_cast<int>(r), h_a - r * (D + 1)};
}

// h^1(E(d)) via the Euler characteristic on P^1.
inline long h1(const GradedPresentation& pres, int d) {
    const RankDegree rd = sheaf_rank_degree(pres);
    const long value = static_cast<long>(h0(pres, d).dimension) - rd.rank * static_cast<long>(d + 1) - rd.degree;
    if (value < 0) throw NotLocallyFree("negative h1 at twist " + std::to_string(d));
    return value;
}

// ---------------------------------------------------------------------------
// Local freeness via Fitting ideals

namespace detail {

// All k x k minors of the relation matrix, as forms (zero minors dropped).
inline std::vector<Form> nonzero_minors(const GradedMap& phi, std::size_t k) {
    std::vector<Form> out;
    const std::size_t n = phi.rows(), m = phi.cols();
    if (k == 0 || k > n || k > m) return out;
    if (m > 20) throw InvalidInput("too many relations for minor enumeration");
    std::vector<std::size_t> rows(k);
    for (std::size_t i = 0; i < k; ++i) rows[i] = i;
    for (;;) {
        // memo[mask] = determinant of rows[0..popcount-1] x columns in mask
        std::vector<std::optional<Form>> memo(std::size_t(1) << m);
        std::vector<bool> known(std::size_t(1) << m, false);
        memo[0] = Form::constant(Integer(1));
        known[0] = true;
        for (std::size_t mask = 1; mask < memo.size(); ++mask) {
            const int pc = __builtin_popcountll(mask);
            if (static_cast<std::size_t>(pc) > k) continue;
            const std::size_t r = rows[static_cast<std::size_t>(pc) - 1];
            std::optional<Form> acc;
            int pos = 0;
            for (std::size_t c = 0; c < m; ++c) {
                if (!(mask & (std::size_t(1) << c))) continue;
                const std::size_t sub = mask & ~(std::size_t(1) << c);
                const Form& entry = phi(r, c);
                if (known[sub] && memo[sub] && entry.degree() >= 0 && !entry.is_zero()) {
                    Form term = entry * *memo[sub];
                    if (((pc - 1) + pos) % 2 == 1) term = term.scaled(Integer(-1));
                    acc = acc ? *acc + term : term;
                }
                ++pos;
            }
            if (acc && acc->is_zero()) acc.reset();
            memo[mask] = acc;
            known[mask] = true;
        }
        for (std::size_t mask = 1; mask < memo.size(); ++mask)
            if (static_cast<std::size_t>(__builtin_popcountll(mask)) == k && memo[mask]) out.push_back(*memo[mask]);
        // next row subset
        std::size_t i = k;
        while (i > 0 && rows[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++rows[i - 1];
        for (std::size_t j = i; j < k; ++j) rows[j] = rows[j - 1] + 1;
    }
    return out;
}

// Rank of the relation matrix over the function field Q(x).
inline std::size_t generic_rank(const GradedMap& phi) {
    if (phi.rows() == 0 || phi.cols() == 0) return 0;
    long bound = 1;
    for (std::size_t j = 0; j < phi.cols(); ++j) {
        int mx = 0;
        for (std::size_t i = 0; i < phi.rows(); ++i) mx = std::max(mx, phi(i, j).degree());
        bound += mx;
    }
    std::size_t best = 0;
    for (long t = 0; t <= bound; ++t) {
        IntegerMatrix v(phi.rows(), phi.cols());
        for (std::size_t i = 0; i < phi.rows(); ++i)
            for (std::size_t j = 0; j < phi.cols(); ++j)
                if (phi(i, j).degree() >= 0) v(i, j) = phi(i, j).evaluate_affine(Integer(t));
        best = std::max(best, rank_rational(v));
        if (best == std::min(phi.rows(), phi.cols())) break;
    }
    return best;
}

}  // namespace detail

struct LocalFreenessReport {
    bool locally_free = false;
    int rank = 0;
    bool generic_failure = false;      // degeneracy over Q itself
    std::vector<Integer> bad_primes;   // fibers where the Fitting ideal is not the unit ideal
};

// Checks that the Fitting ideal of the expected rank has no zero anywhere on
// P^1 over the base: the ideal of (N - r)-minors, in degree 2*delta - 1,
// must span every form of that degree (over Z: at every prime).
inline LocalFreenessReport local_freeness(const GradedPresentation& pres) {
    LocalFreenessReport rep;
    const std::size_t n = pres.generators().rank();
    const std::size_t grank = detail::generic_rank(pres.relations);
    rep.rank = static_cast<int>(n - grank);
    if (grank == 0) {
        rep.locally_free = true;
        return rep;
    }
    std::vector<Form> minors = detail::nonzero_minors(pres.relations, grank);
    int delta = 0;
    for (const Form& f : minors) delta = std::max(delta, f.degree());
    const int D = std::max(0, 2 * delta - 1);
    std::vector<Integer> cols;
    std::size_t ncols = 0;
    for (const Form& f : minors) ncols += static_cast<std::size_t>(D - f.degree() + 1);
    IntegerMatrix span(static_cast<std::size_t>(D) + 1, ncols);
    std::size_t c = 0;
    for (const Form& f : minors)
        for (int j = 0; j <= D - f.degree(); ++j, ++c) {
            const Form g = f * Form::monomial(D - f.degree(), j);
            for (int s = 0; s <= D; ++s) span(static_cast<std::size_t>(s), c) = g.coeff(s);
        }
    const std::size_t full = static_cast<std::size_t>(D) + 1;
    if (pres.base.is_prime()) {
        rep.locally_free = rank_over(span, pres.base) == full;
        if (!rep.locally_free) rep.bad_primes.emplace_back(static_cast<unsigned long>(pres.base.p));
        return rep;
    }
    if (rank_rational(span) != full) {
        rep.generic_failure = true;
        return rep;
    }
    if (pres.base.kind == BaseRing::Kind::Rationals) {
        rep.locally_free = true;
        return rep;
    }
    rep.bad_primes = rank_drop_primes(span);
    rep.locally_free = rep.bad_primes.empty();
    return rep;
}

inline void verify_locally_free(const GradedPresentation& pres) {
    const LocalFreenessReport rep = local_freeness(pres);
    if (rep.locally_free) return;
    if (rep.generic_failure) throw NotLocallyFree("Fitting ideal vanishes at a point of the generic fiber");
    std::string primes;
    for (const auto& p : rep.bad_primes) primes += (primes.empty() ? "" : ",") + to_decimal(p);
    throw NotLocallyFree("Fitting ideal is not the unit ideal over the primes {" + primes + "}");
}

// ---------------------------------------------------------------------------
// Integral section lattices

// Lattices H^0(E(d)) for d in a window, embedded in the integer coordinates
// of M_{D*} by s -> x0^(D*-d) s. In these coordinates multiplication by x0
// is the inclusion L_d ⊆ L_{d+1}; multiplication by x1 is recorded as a
// matrix in the chosen bases.
struct SectionLatticeFamily {
    int d_min = 0;
    int d_max = 0;
    int ambient_twist = 0;                 // D*
    IntegerMatrix coordinates;             // rows are functionals F_{D*} -> Z with kernel Phi(G_{D*})
    std::vector<LatticeBasis> lattices;    // index d - d_min
    std::vector<IntegerMatrix> times_x0;   // L_d -> L_{d+1}, in lattice bases
    std::vector<IntegerMatrix> times_x1;

    const LatticeBasis& at(int d) const { return lattices.at(static_cast<std::size_t>(d - d_min)); }
};

namespace detail {

inline std::vector<Integer> integral_or_throw(const std::vector<mpq_class>& v) {
    std::vector<Integer> out;
    out.reserve(v.size());
    for (const auto& q : v) {
        if (q.get_den() != 1) throw InvalidInput("expected an integral solution");
        out.push_back(q.get_num());
    }
    return out;
}

inline IntegerMatrix express_in_basis(const LatticeBasis& target, const std::vector<std::vector<Integer>>& vectors) {
    IntegerMatrix out(target.rank(), vectors.size());
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        const auto sol = solve_rational(target.basis, vectors[j]);
        if (!sol) throw InvalidInput("multiplication image escapes the section lattice");
        const auto coeffs = integral_or_throw(*sol);
        for (std::size_t i = 0; i < coeffs.size(); ++i) out(i, j) = coeffs[i];
    }
    return out;
}

}  // namespace detail

inline SectionLatticeFamily lattice_family(const GradedPresentation& pres, int d_min, int d_max) {
    if (pres.base.kind != BaseRing::Kind::Integers)
        throw InvalidInput("lattice_family expects a presentation over the integers");
    if (d_max < d_min) throw InvalidInput("empty window");
    SectionLatticeFamily fam;
    fam.d_min = d_min;
    fam.d_max = d_max;
    const int D = std::max(d_max + 1, saturation_twist(pres));
    fam.ambient_twist = D;
    const FreeGraded& gens = pres.generators();
    const IntegerMatrix phi_d = degree_piece(pres.relations, D);
    const LatticeBasis dual = kernel_lattice(phi_d.transposed());
    fam.coordinates = dual.basis.transposed();
    const std::size_t nf = gens.dim(D);

    for (int d = d_min; d <= d_max; ++d) {
        const int e = D - d;
        const HomSystem sys = hom_system(pres, D - e, e);
        // solutions (f, g, w) of x1^e f - x0^e g - Phi w = 0 with f, g in F_D
        const LatticeBasis sol = kernel_lattice(sys.hom);
        IntegerMatrix f_part(nf, sol.rank());
        for (std::size_t i = 0; i < nf; ++i)
            for (std::size_t j = 0; j < sol.rank(); ++j) f_part(i, j) = sol.basis(i, j);
        fam.lattices.push_back(hermite_basis(fam.coordinates * f_part));
    }

    // lift coordinates back to F_D rationally, then solve x0 w = x1 u in M_{D+1}
    const IntegerMatrix x0 = scalar_multiplication_piece(gens, Form::x0_power(1), D);
    const IntegerMatrix x1 = scalar_multiplication_piece(gens, Form::x1_power(1), D);
    const IntegerMatrix phi_up = degree_piece(pres.relations, D + 1);
    const IntegerMatrix neg_phi_up = detail::negated(phi_up);
    const IntegerMatrix x0_system = hstack({&x0, &neg_phi_up}, gens.dim(D + 1));
    for (int d = d_min; d < d_max; ++d) {
        const LatticeBasis& src = fam.at(d);
        const LatticeBasis& dst = fam.at(d + 1);
        std::vector<std::vector<Integer>> x0_images, x1_images;
        for (std::size_t j = 0; j < src.rank(); ++j) {
            std::vector<Integer> u(src.ambient);
            for (std::size_t i = 0; i < src.ambient; ++i) u[i] = src.basis(i, j);
            x0_images.push_back(u);
            // rational lift of u to F_D, scaled to integers
            const auto lift = solve_rational(fam.coordinates, u);
            if (!lift) throw InvalidInput("coordinate lift failed");
            Integer den(1);
            for (const auto& q : *lift) den = lcm(den, Integer(q.get_den()));
            std::vector<Integer> f(nf);
            for (std::size_t i = 0; i < nf; ++i) f[i] = Integer((*lift)[i] * den);
            std::vector<Integer> rhs(x1.rows());
            for (std::size_t r = 0; r < x1.rows(); ++r)
                for (std::size_t c = 0; c < nf; ++c) rhs[r] += x1(r, c) * f[c];
            const auto w = solve_rational(x0_system, rhs);
            if (!w) throw InvalidInput("x1-multiplication is not divisible by x0");
            std::vector<mpq_class> coords(fam.coordinates.rows());
            for (std::size_t r = 0; r < fam.coordinates.rows(); ++r) {
                mpq_class acc = 0;
                for (std::size_t c = 0; c < nf; ++c) acc += mpq_class(fam.coordinates(r, c)) * (*w)[c];
                acc /= mpq_class(den);
                coords[r] = acc;
            }
            x1_images.push_back(detail::integral_or_throw(coords));
        }
        fam.times_x0.push_back(detail::express_in_basis(dst, x0_images));
        fam.times_x1.push_back(detail::express_in_basis(dst, x1_images));
    }
    return fam;
}

}  // namespace arithsurf
