#pragma once

// Elementary transformations of bundles on P^1_Z along a closed fiber:
// E' = ker(E -> i_* O_{P^1_{F_p}}(m)), returned as a cokernel presentation.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "arithsurf/bundles.hpp"

namespace arithsurf {

// A quotient E|_p -> O(m) on the fiber over p, given on generators: entry i
// is a form over F_p of degree m - a_i (zero where that is negative).
struct FiberQuotient {
    Integer p;
    int m = 0;
    std::vector<Form> row;

    // The (g, h) shape against a split (a1, a2) source.
    static FiberQuotient from_pair(Integer p, int m, Form g, Form h) {
        return FiberQuotient{std::move(p), m, {std::move(g), std::move(h)}};
    }

    bool operator==(const FiberQuotient&) const = default;
};

struct QuotientVerdict {
    std::uint64_t p = 0;
    int surjective_from = 0;   // cokernel pieces vanish from this twist on
    std::vector<Form> row;     // reduced into [0, p)
};

namespace detail {

inline GradedMap row_map(const FreeGraded& gens, int m, const std::vector<Form>& row) {
    GradedMap out(gens, FreeGraded{{m}});
    for (std::size_t i = 0; i < gens.rank(); ++i) out.set(0, i, row[i]);
    return out;
}

inline ModMatrix mod_piece(const GradedMap& phi, int d, const PrimeField& f) {
    return reduce_matrix(degree_piece(phi, d), f);
}

}  // namespace detail

// Checks degree compatibility, that the row kills the relations mod p and
// that the fiber map is surjective. Throws DegreeMismatch / NotSurjective.
inline QuotientVerdict validate_quotient(const BundleHandle& bundle, const FiberQuotient& q) {
    if (q.p == 0) throw UnsupportedCenter("horizontal centers are not supported");
    const std::uint64_t p = require_word_prime(q.p);
    const GradedPresentation& pres = bundle.presentation();
    const FreeGraded& gens = pres.generators();
    if (q.row.size() != gens.rank())
        throw DegreeMismatch("quotient has " + std::to_string(q.row.size()) + " entries for " +
                             std::to_string(gens.rank()) + " generators");
    QuotientVerdict out;
    out.p = p;
    bool any_allowed = false;
    int delta = 0;
    for (std::size_t i = 0; i < gens.rank(); ++i) {
        const int want = q.m - gens.twists[i];
        const Form f = q.row[i].reduced(p);
        if (want < 0) {
            if (!f.is_zero()) throw DegreeMismatch("entry " + std::to_string(i) + " must vanish (negative degree)");
            out.row.push_back(Form::zero(want));
            continue;
        }
        any_allowed = true;
        if (f.degree() != want && !f.is_zero())
            throw DegreeMismatch("entry " + std::to_string(i) + " has degree " + std::to_string(f.degree()) +
                                 ", expected " + std::to_string(want));
        out.row.push_back(f.is_zero() ? Form::zero(want) : f);
        if (!f.is_zero()) delta = std::max(delta, want);
    }
    if (!any_allowed) throw DegreeMismatch("target twist " + std::to_string(q.m) + " is below every generator twist");

    const GradedMap row = detail::row_map(gens, q.m, out.row);
    const GradedMap killed = compose(row, pres.relations);
    for (const Form& f : killed.entries())
        if (!f.reduced(p).is_zero()) throw InvalidInput("quotient does not vanish on the relations mod p");

    // An ideal of F_p[x0,x1] generated in degrees <= delta with no common zero
    // contains every form of degree >= 2 delta - 1.
    const int top = std::max(0, 2 * delta - 1);
    out.surjective_from = top - q.m;
    const PrimeField field{p};
    const std::size_t image = rank_mod(detail::mod_piece(row, out.surjective_from, field), field);
    if (image != static_cast<std::size_t>(top + 1))
        throw NotSurjective("fiber map misses forms of degree " + std::to_string(top), out.surjective_from);
    return out;
}

namespace detail {

using ModVector = std::vector<std::uint64_t>;

// Coordinates of an element of F_D (one form per summand) over F_p.
inline ModVector element_coords(const FreeGraded& gens, int D, const std::vector<Form>& el, const PrimeField& f) {
    ModVector v(gens.dim(D), 0);
    for (std::size_t i = 0; i < gens.rank(); ++i) {
        const int deg = gens.twists[i] + D;
        const std::size_t off = gens.offset(i, D);
        for (int j = 0; j <= deg; ++j) v[off + static_cast<std::size_t>(j)] = f.reduce(el[i].coeff(j));
    }
    return v;
}

inline std::vector<Form> coords_element(const FreeGraded& gens, int D, const ModVector& v) {
    std::vector<Form> el;
    for (std::size_t i = 0; i < gens.rank(); ++i) {
        const int deg = gens.twists[i] + D;
        Form form = Form::zero(deg);
        const std::size_t off = gens.offset(i, D);
        for (int j = 0; j <= deg; ++j) form.coeff(j) = Integer(static_cast<unsigned long>(v[off + static_cast<std::size_t>(j)]));
        el.push_back(std::move(form));
    }
    return el;
}

// x0^s x1^t times an element of F_D, as coordinates in F_{D+s+t}.
inline ModVector shift_coords(const FreeGraded& gens, int D, const ModVector& v, int s, int t) {
    const int E = D + s + t;
    ModVector out(gens.dim(E), 0);
    for (std::size_t i = 0; i < gens.rank(); ++i) {
        const int deg = gens.twists[i] + D;
        const std::size_t from = gens.offset(i, D), to = gens.offset(i, E);
        for (int j = 0; j <= deg; ++j) out[to + static_cast<std::size_t>(j + t)] = v[from + static_cast<std::size_t>(j)];
    }
    return out;
}

inline ModMatrix columns_matrix(std::size_t rows, const std::vector<ModVector>& cols) {
    ModMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
}

inline std::optional<ModVector> solve_mod(const std::vector<ModVector>& cols, const ModVector& rhs,
                                          const PrimeField& f) {
    ModMatrix m(rhs.size(), cols.size() + 1);
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rhs.size(); ++i) m(i, j) = cols[j][i];
    for (std::size_t i = 0; i < rhs.size(); ++i) m(i, cols.size()) = rhs[i];
    const auto pivots = rref(m, f);
    ModVector x(cols.size(), 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        if (pivots[r] == cols.size()) return std::nullopt;
        x[pivots[r]] = m(r, cols.size());
    }
    return x;
}

struct KernelGenerator {
    int twist;          // c: the generator lives in degree -c of F
    ModVector coords;   // in F_{-c}
};

// Multiples of the generators found so far, spanning their degree-D piece.
inline std::vector<ModVector> generated_piece(const FreeGraded& gens, const std::vector<KernelGenerator>& ks, int D) {
    std::vector<ModVector> out;
    for (const auto& k : ks) {
        const int deg = D + k.twist;
        for (int t = 0; t <= deg; ++t) out.push_back(shift_coords(gens, -k.twist, k.coords, deg - t, t));
    }
    return out;
}

// Minimal generators of ker(row : F -> S(m)) over F_p. The kernel is free of
// rank N - 1 with first Chern class sum(a_i) - m when the row has no common zero.
inline std::vector<KernelGenerator> fiber_kernel(const FreeGraded& gens, const GradedMap& row, int m,
                                                 const PrimeField& f) {
    const std::size_t want = gens.rank() - 1;
    long c1 = -m;
    for (int a : gens.twists) c1 += a;
    const int lo = -max_or(gens.twists, 0);
    const int spread = std::max(0, m - min_or(gens.twists, 0) + 1);
    const int hi = lo + static_cast<int>(gens.rank()) * spread + 4;
    std::vector<KernelGenerator> ks;
    auto sum_twists = [&] {
        long s = 0;
        for (const auto& k : ks) s += k.twist;
        return s;
    };
    for (int D = lo; D <= hi; ++D) {
        const std::size_t n = gens.dim(D);
        if (n == 0) continue;
        const auto null = nullspace_mod(mod_piece(row, D, f), f);
        std::vector<ModVector> span = generated_piece(gens, ks, D);
        std::size_t r = span.empty() ? 0 : rank_mod(columns_matrix(n, span), f);
        if (r > null.size()) throw InvalidInput("kernel generators leave the kernel");
        for (const ModVector& v : null) {
            if (r == null.size()) break;
            span.push_back(v);
            const std::size_t r2 = rank_mod(columns_matrix(n, span), f);
            if (r2 > r) {
                ks.push_back({-D, v});
                r = r2;
            } else {
                span.pop_back();
            }
        }
        if (ks.size() == want && sum_twists() == c1) {
            for (int E = D + 1; E <= D + 2; ++E) {
                std::size_t free_dim = 0;
                for (const auto& k : ks) free_dim += piece_dim(k.twist, E);
                if (free_dim != nullspace_mod(mod_piece(row, E, f), f).size())
                    throw InvalidInput("fiber kernel is not free on the extracted generators");
            }
            return ks;
        }
        if (ks.size() > want) throw InvalidInput("fiber kernel has too many generators");
    }
    throw WindowExhausted("fiber kernel generators not found by degree " + std::to_string(hi));
}

// Drops generators killed by a relation with a unit constant entry.
inline void prune_units(GradedPresentation& pres, GradedMap& inclusion) {
    for (;;) {
        const GradedMap& phi = pres.relations;
        std::size_t pi = 0, pj = 0;
        bool found = false;
        for (std::size_t j = 0; j < phi.cols() && !found; ++j)
            for (std::size_t i = 0; i < phi.rows() && !found; ++i) {
                const Form& f = phi(i, j);
                if (f.degree() == 0 && (f.coeff(0) == 1 || f.coeff(0) == -1)) {
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        if (!found) return;
        const Integer unit = phi(pi, pj).coeff(0);
        FreeGraded src, tgt;
        for (std::size_t j = 0; j < phi.cols(); ++j)
            if (j != pj) src.twists.push_back(phi.source().twists[j]);
        for (std::size_t i = 0; i < phi.rows(); ++i)
            if (i != pi) tgt.twists.push_back(phi.target().twists[i]);
        GradedMap next(src, tgt);
        std::size_t cj = 0;
        for (std::size_t j = 0; j < phi.cols(); ++j) {
            if (j == pj) continue;
            // column_j - (phi(pi, j) / unit) * column_pj
            const Form factor = phi(pi, j).scaled(unit);
            std::size_t ci = 0;
            for (std::size_t i = 0; i < phi.rows(); ++i) {
                if (i == pi) continue;
                Form entry = phi(i, j);
                if (factor.degree() >= 0 && phi(i, pj).degree() >= 0 && !factor.is_zero() && !phi(i, pj).is_zero())
                    entry = entry.degree() >= 0 ? entry - factor * phi(i, pj) : (factor * phi(i, pj)).scaled(Integer(-1));
                next.set(ci, cj, entry);
                ++ci;
            }
            ++cj;
        }
        FreeGraded inc_src;
        for (std::size_t i = 0; i < inclusion.cols(); ++i)
            if (i != pi) inc_src.twists.push_back(inclusion.source().twists[i]);
        GradedMap inc(inc_src, inclusion.target());
        for (std::size_t r = 0; r < inclusion.rows(); ++r) {
            std::size_t c = 0;
            for (std::size_t i = 0; i < inclusion.cols(); ++i) {
                if (i == pi) continue;
                inc.set(r, c++, inclusion(r, i));
            }
        }
        pres.relations = std::move(next);
        inclusion = std::move(inc);
    }
}

}  // namespace detail

// The transformed bundle and the map from its generators to the old ones.
struct TransformResult {
    BundleHandle bundle;
    GradedMap inclusion;
};

inline TransformResult apply_with_inclusion(const BundleHandle& bundle, const FiberQuotient& q) {
    const QuotientVerdict verdict = validate_quotient(bundle, q);
    const PrimeField f{verdict.p};
    const Integer p(static_cast<unsigned long>(verdict.p));
    const GradedPresentation& pres = bundle.presentation();
    const FreeGraded& gens = pres.generators();
    const GradedMap& phi = pres.relations;
    const std::size_t N = gens.rank();

    const GradedMap row = detail::row_map(gens, q.m, verdict.row);
    const auto ks = detail::fiber_kernel(gens, row, q.m, f);
    const std::size_t L = ks.size();
    std::vector<std::vector<Form>> lifts;
    for (const auto& k : ks) lifts.push_back(detail::coords_element(gens, -k.twist, k.coords));

    // New generators: p e_i (twist a_i), then the lifted kernel generators.
    FreeGraded new_gens = gens;
    for (const auto& k : ks) new_gens.twists.push_back(k.twist);
    FreeGraded new_rels;
    for (const auto& k : ks) new_rels.twists.push_back(k.twist);
    for (int b : phi.source().twists) new_rels.twists.push_back(b);
    GradedMap relations(new_rels, new_gens);

    for (std::size_t l = 0; l < L; ++l) {
        for (std::size_t i = 0; i < N; ++i) relations.set(i, l, lifts[l][i].scaled(Integer(-1)));
        relations.set(N + l, l, Form::constant(p));
    }

    for (std::size_t j = 0; j < phi.cols(); ++j) {
        const int D = -phi.source().twists[j];
        std::vector<Form> column;
        for (std::size_t i = 0; i < N; ++i) column.push_back(phi(i, j));
        std::vector<detail::ModVector> span;
        std::vector<std::pair<std::size_t, int>> owner;  // (generator, x1-power)
        for (std::size_t l = 0; l < L; ++l) {
            const int deg = D + ks[l].twist;
            for (int t = 0; t <= deg; ++t) {
                span.push_back(detail::shift_coords(gens, -ks[l].twist, ks[l].coords, deg - t, t));
                owner.emplace_back(l, t);
            }
        }
        const auto beta = detail::solve_mod(span, detail::element_coords(gens, D, column, f), f);
        if (!beta) throw InvalidInput("relation does not reduce into the fiber kernel");
        std::vector<Form> beta_forms;
        for (std::size_t l = 0; l < L; ++l) beta_forms.push_back(Form::zero(D + ks[l].twist));
        for (std::size_t c = 0; c < owner.size(); ++c)
            beta_forms[owner[c].first].coeff(owner[c].second) = Integer(static_cast<unsigned long>((*beta)[c]));
        for (std::size_t i = 0; i < N; ++i) {
            Form acc = column[i];
            for (std::size_t l = 0; l < L; ++l)
                if (beta_forms[l].degree() >= 0 && lifts[l][i].degree() >= 0) acc = acc - beta_forms[l] * lifts[l][i];
            relations.set(i, L + j, acc.degree() >= 0 ? acc.divided_exact(p) : acc);
        }
        for (std::size_t l = 0; l < L; ++l) relations.set(N + l, L + j, beta_forms[l]);
    }

    GradedMap inclusion(new_gens, gens);
    for (std::size_t i = 0; i < N; ++i) {
        inclusion.set(i, i, Form::constant(p));
        for (std::size_t l = 0; l < L; ++l) inclusion.set(i, N + l, lifts[l][i]);
    }

    GradedPresentation out{BaseRing::integers(), std::move(relations)};
    detail::prune_units(out, inclusion);
    BundleHandle handle(std::move(out));
    if (handle.rank() != bundle.rank() || handle.degree() != bundle.degree())
        throw InvalidInput("transformed bundle changed rank or fiber degree");
    return TransformResult{std::move(handle), std::move(inclusion)};
}

inline BundleHandle apply(const BundleHandle& bundle, const FiberQuotient& q) {
    return apply_with_inclusion(bundle, q).bundle;
}

struct PrescribedJump {
    Integer p;
    int n = 1;
    std::optional<std::pair<Form, Form>> surjection;  // (g, h); default (x0^n, x1^(n + type))
};

// Rank-2 bundle with generic type n and type n + 2 n_i exactly at p_i, built
// from O(-1) + O(-n-1) by one fiber transformation per prime.
inline BundleHandle prescribed_types(int n, const std::vector<PrescribedJump>& jumps) {
    if (n < 0) throw InvalidInput("generic type must be nonnegative");
    std::set<Integer> seen;
    for (const auto& j : jumps) {
        if (!seen.insert(j.p).second) throw DuplicatePrime("prime " + to_decimal(j.p) + " listed twice");
        require_prime(j.p);
        if (j.n < 1) throw InvalidInput("jump size must be at least 1");
    }
    const BundleHandle start = split_bundle({-1, -n - 1});
    BundleHandle current = start;
    const FreeGraded& base = start.presentation().generators();
    GradedMap to_base(base, base);
    for (std::size_t i = 0; i < base.rank(); ++i) to_base.set(i, i, Form::constant(Integer(1)));
    for (const auto& j : jumps) {
        const int m = j.n - 1;
        Form g = j.surjection ? j.surjection->first : Form::x0_power(j.n);
        Form h = j.surjection ? j.surjection->second : Form::x1_power(j.n + n);
        const GradedMap original = detail::row_map(base, m, {g, h});
        const GradedMap pulled = compose(original, to_base);
        FiberQuotient q{j.p, m, {}};
        const std::uint64_t p = require_word_prime(j.p);
        for (std::size_t i = 0; i < pulled.cols(); ++i) q.row.push_back(pulled(0, i).reduced(p));
        TransformResult step = apply_with_inclusion(current, q);
        to_base = compose(to_base, step.inclusion);
        current = std::move(step.bundle);
    }
    return current;
}

// ---------------------------------------------------------------------------
// Blow-up factorization records

// A section of P(E|_p) -> P^1_{F_p} given by a line-bundle quotient
// E|_p -> O(twist); relative_degree = twist - b_p(E).
struct SectionCenter {
    Integer p;
    long twist = 0;
    long relative_degree = 0;
    std::vector<Form> quotient;  // on generators; empty when only the twist is recorded

    bool operator==(const SectionCenter&) const = default;
};

struct BlowupFactorization {
    Integer p;
    int m = 0;
    std::string source_id;
    std::string target_id;
    SplittingProfile source_profile;
    SplittingProfile target_profile;
    SectionCenter center_V;
    SectionCenter center_U;

    bool operator==(const BlowupFactorization&) const = default;
};

// FNV-1a over a canonical text rendering of the presentation.
inline std::string bundle_id(const BundleHandle& bundle) {
    const GradedPresentation& pres = bundle.presentation();
    std::string text = pres.base.tag() + "|";
    for (int a : pres.generators().twists) text += std::to_string(a) + ",";
    text += "|";
    for (int b : pres.relation_twists().twists) text += std::to_string(b) + ",";
    text += "|";
    for (const Form& f : pres.relations.entries()) text += form_text(f) + ";";
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 15];
    return out;
}

namespace detail {

// Twist of the image of E'|_p in E|_p, read off its Hilbert function.
inline long image_line_twist(const BundleHandle& source, const TransformResult& t, std::uint64_t p) {
    const PrimeField f{p};
    const GradedPresentation& pres = source.presentation();
    const int spread = std::max(0, max_or(t.inclusion.source().twists, 0) - min_or(pres.relation_twists().twists, 0));
    // past the saturation of E and the degree where the image is generated
    const int D = std::max(saturation_twist(pres), -min_or(t.inclusion.source().twists, 0)) + spread + 2;
    std::size_t dims[2];
    for (int k = 0; k < 2; ++k) {
        const IntegerMatrix inc = degree_piece(t.inclusion, D + k);
        const IntegerMatrix rel = degree_piece(pres.relations, D + k);
        const IntegerMatrix both = hstack({&inc, &rel}, pres.generators().dim(D + k));
        dims[k] = rank_mod(reduce_matrix(both, f), f) - rank_mod(reduce_matrix(rel, f), f);
    }
    if (dims[1] != dims[0] + 1) throw InvalidInput("image of the transformed fiber is not a line bundle");
    return static_cast<long>(dims[0]) - D - 1;
}

}  // namespace detail

inline BlowupFactorization blowup_factorization(const BundleHandle& bundle, const FiberQuotient& q) {
    bundle.require_rank_two();
    const QuotientVerdict verdict = validate_quotient(bundle, q);
    const TransformResult t = apply_with_inclusion(bundle, q);
    BlowupFactorization out;
    out.p = q.p;
    out.m = q.m;
    out.source_id = bundle_id(bundle);
    out.target_id = bundle_id(t.bundle);
    out.source_profile = type_profile(bundle);
    out.target_profile = type_profile(t.bundle);
    const SplittingType src = out.source_profile.at(q.p);
    const SplittingType tgt = out.target_profile.at(q.p);
    out.center_V = SectionCenter{q.p, q.m, q.m - src.b, verdict.row};
    const long u_twist = bundle.degree() - q.m;
    if (detail::image_line_twist(bundle, t, verdict.p) != u_twist)
        throw InvalidInput("kernel line twist disagrees with the degree count");
    out.center_U = SectionCenter{q.p, u_twist, u_twist - tgt.b, {}};
    return out;
}

}  // namespace arithsurf
