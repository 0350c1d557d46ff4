#pragma once

// Splitting types of vector bundles on P^1 over Z at the generic point and at
// every prime, jump detection through invariant factors, normalization and
// the parity / 2h^0 identities for rank-2 bundles.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arithsurf/cohomology.hpp"

namespace arithsurf {

// Pair (a, b) with a <= b: the fiber is O(a) + O(b).
struct SplittingType {
    long a = 0;
    long b = 0;

    long type() const noexcept { return b - a; }
    long degree() const noexcept { return a + b; }
    bool operator==(const SplittingType&) const = default;
};

// Generic splitting type plus the finitely many primes where it jumps.
struct SplittingProfile {
    SplittingType generic;
    std::map<Integer, SplittingType> jumps;

    // Splitting type at p (generic if p is unlisted).
    SplittingType at(const Integer& p) const {
        auto it = jumps.find(p);
        return it == jumps.end() ? generic : it->second;
    }

    bool is_constant() const noexcept { return jumps.empty(); }

    // Same generic type and jump types, ignoring an overall twist.
    bool same_types(const SplittingProfile& o) const {
        if (generic.type() != o.generic.type() || jumps.size() != o.jumps.size()) return false;
        for (const auto& [p, t] : jumps) {
            auto it = o.jumps.find(p);
            if (it == o.jumps.end() || it->second.type() != t.type()) return false;
        }
        return true;
    }

    SplittingProfile twisted(long t) const {
        SplittingProfile out{{generic.a + t, generic.b + t}, {}};
        for (const auto& [p, s] : jumps) out.jumps.emplace(p, SplittingType{s.a + t, s.b + t});
        return out;
    }

    bool operator==(const SplittingProfile&) const = default;
};

// A locally free sheaf on P^1_Z given by a cokernel presentation. Rank and
// degree are computed at construction; the splitting profile is computed
// once on demand and shared between copies.
class BundleHandle {
public:
    explicit BundleHandle(GradedPresentation pres) : pres_(std::move(pres)) {
        if (pres_.base.kind != BaseRing::Kind::Integers)
            throw InvalidInput("bundle handles are presented over the integers");
        verify_locally_free(pres_);
        rank_degree_ = sheaf_rank_degree(pres_);
        cache_ = std::make_shared<Cache>();
    }

    const GradedPresentation& presentation() const noexcept { return pres_; }
    int rank() const noexcept { return rank_degree_.rank; }
    long degree() const noexcept { return rank_degree_.degree; }
    int guard() const { return window_guard(pres_); }

    void require_rank_two() const {
        if (rank() != 2) throw InvalidInput("operation needs a rank-2 bundle, got rank " + std::to_string(rank()));
    }

    // Profile cache; `compute` runs at most once across all copies.
    template <class F>
    SplittingProfile cached_profile(F&& compute) const {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        if (!cache_->profile) cache_->profile = compute();
        return *cache_->profile;
    }

    void seed_profile(SplittingProfile profile) const {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        if (!cache_->profile) cache_->profile = std::move(profile);
    }

private:
    struct Cache {
        std::mutex mutex;
        std::optional<SplittingProfile> profile;
    };

    GradedPresentation pres_;
    RankDegree rank_degree_;
    std::shared_ptr<Cache> cache_;
};

inline BundleHandle split_bundle(std::vector<int> twists) { return BundleHandle(split_presentation(std::move(twists))); }

namespace detail {

inline GradedPresentation fiber_presentation(const BundleHandle& bundle, const std::optional<Integer>& prime) {
    return prime ? reduce_mod(bundle.presentation(), *prime) : bundle.presentation();
}

inline std::size_t expected_split_h0(const SplittingType& t, long d) {
    return static_cast<std::size_t>(std::max(0L, t.a + d + 1) + std::max(0L, t.b + d + 1));
}

}  // namespace detail

// Splitting type at the generic fiber (nullopt) or over a prime.
inline SplittingType splitting_type(const BundleHandle& bundle, const std::optional<Integer>& prime = std::nullopt) {
    bundle.require_rank_two();
    const GradedPresentation fiber = detail::fiber_presentation(bundle, prime);
    const long e = bundle.degree();
    const long guard = bundle.guard();
    const long start = -(std::labs(e) + guard);
    const long stop = std::labs(e) + guard;
    std::string where = prime ? "p=" + to_decimal(*prime) : std::string("generic");
    for (long d = start; d <= stop; ++d) {
        if (h0(fiber, static_cast<int>(d)).dimension == 0) continue;
        if (d == start) throw ProfileInconsistent("sections already present at the scan start (" + where + ")");
        SplittingType t{e + d, -d};
        if (t.a > t.b) throw ProfileInconsistent("first section twist gives a > b (" + where + ")");
        for (long k = 0; k <= 3; ++k) {
            const std::size_t got = h0(fiber, static_cast<int>(d + k)).dimension;
            if (got != detail::expected_split_h0(t, d + k))
                throw ProfileInconsistent("h0 at twist " + std::to_string(d + k) + " is " + std::to_string(got) +
                                          ", not that of O(" + std::to_string(t.a) + ")+O(" + std::to_string(t.b) +
                                          ") (" + where + ")");
        }
        return t;
    }
    throw ProfileInconsistent("no sections found up to twist " + std::to_string(stop) + " (" + where + ")");
}

// Primes where a degree-piece matrix of the h^0 computation drops rank, for
// twists d in [d_lo, d_hi]; these are the prime divisors of its invariant factors.
inline std::vector<Integer> jump_candidates(const GradedPresentation& pres, long d_lo, long d_hi) {
    std::set<Integer> primes;
    auto absorb = [&](const IntegerMatrix& m) {
        for (const Integer& p : rank_drop_primes(m)) primes.insert(p);
    };
    for (long d = d_lo; d <= d_hi; ++d) {
        const int e = stabilization_start(pres, static_cast<int>(d));
        const HomSystem sys = hom_system(pres, static_cast<int>(d), e);
        absorb(sys.hom);
        absorb(sys.relations_low);
        absorb(sys.relations_high);
    }
    return {primes.begin(), primes.end()};
}

// Generic type plus every prime where the fiber type differs. Candidate
// primes come from rank drops over the critical twist range
// [-b_gen - guard, -a_gen]; each candidate is verified by a fiber scan.
inline SplittingProfile type_profile(const BundleHandle& bundle) {
    return bundle.cached_profile([&] {
        SplittingProfile profile;
        profile.generic = splitting_type(bundle);
        const long lo = -profile.generic.b - bundle.guard();
        const long hi = -profile.generic.a;
        for (const Integer& p : jump_candidates(bundle.presentation(), lo, hi)) {
            const SplittingType t = splitting_type(bundle, p);
            if (!(t == profile.generic)) profile.jumps.emplace(p, t);
        }
        return profile;
    });
}

// Twist so that the generic splitting is (-n-1, -1).
inline BundleHandle normalize(const BundleHandle& bundle) {
    const SplittingProfile& profile = type_profile(bundle);
    const long t = -1 - profile.generic.b;
    if (t == 0) return bundle;
    BundleHandle out(twist(bundle.presentation(), static_cast<int>(t)));
    out.seed_profile(profile.twisted(t));
    return out;
}

inline bool is_normalized(const BundleHandle& bundle) { return type_profile(bundle).generic.b == -1; }

struct ParityEntry {
    Integer prime;
    long delta = 0;
};

// Every jump delta (type_p - type_generic) is even and positive.
inline std::vector<ParityEntry> check_parity(const BundleHandle& bundle) {
    bundle.require_rank_two();
    const SplittingProfile& profile = type_profile(bundle);
    std::vector<ParityEntry> out;
    for (const auto& [p, t] : profile.jumps) {
        const long delta = t.type() - profile.generic.type();
        if (delta <= 0 || delta % 2 != 0)
            throw ParityViolation("type delta " + std::to_string(delta) + " at p=" + to_decimal(p));
        if (t.degree() != profile.generic.degree())
            throw ParityViolation("fiber degree changes at p=" + to_decimal(p));
        out.push_back({p, delta});
    }
    return out;
}

struct TypeH0Entry {
    Integer prime;
    long delta = 0;
    std::size_t h0 = 0;
};

// Both sides of delta = 2 h^0(E|_p) for the normalized twist at one prime.
inline TypeH0Entry type_h0_at(const BundleHandle& bundle, const Integer& p) {
    bundle.require_rank_two();
    const BundleHandle normalized = normalize(bundle);
    const SplittingProfile& profile = type_profile(normalized);
    const long delta = profile.at(p).type() - profile.generic.type();
    const std::size_t h = h0(reduce_mod(normalized.presentation(), p), 0).dimension;
    return TypeH0Entry{p, delta, h};
}

inline std::vector<TypeH0Entry> check_type_h0(const BundleHandle& bundle) {
    std::vector<TypeH0Entry> out;
    const SplittingProfile profile = type_profile(bundle);
    for (const auto& [p, t] : profile.jumps) {
        TypeH0Entry entry = type_h0_at(bundle, p);
        if (entry.delta != 2 * static_cast<long>(entry.h0))
            throw IdentityViolation("at p=" + to_decimal(p) + ": delta " + std::to_string(entry.delta) +
                                    " but h0 = " + std::to_string(entry.h0));
        out.push_back(std::move(entry));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Split certificates

namespace detail {

// An integer x with A x = b, if one exists.
inline std::optional<std::vector<Integer>> integral_solution(const IntegerMatrix& a, const std::vector<Integer>& b) {
    IntegerMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        aug(i, 0) = -b[i];
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j + 1) = a(i, j);
    }
    const LatticeBasis ker = kernel_lattice(aug);
    if (ker.rank() == 0 || ker.basis(0, 0) != 1) return std::nullopt;
    std::vector<Integer> x(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) x[j] = ker.basis(j + 1, 0);
    return x;
}

// Column of forms representing an element of F_D (relation twist -D).
inline std::vector<Form> element_forms(const FreeGraded& gens, int D, const std::vector<Integer>& coords) {
    std::vector<Form> out;
    for (std::size_t i = 0; i < gens.rank(); ++i) {
        const int deg = gens.twists[i] + D;
        Form f = Form::zero(deg);
        const std::size_t off = gens.offset(i, D);
        for (int j = 0; j <= deg; ++j) f.coeff(j) = coords[off + static_cast<std::size_t>(j)];
        out.push_back(std::move(f));
    }
    return out;
}

inline GradedPresentation append_columns(const GradedPresentation& pres, const std::vector<std::vector<Form>>& columns,
                                         int column_twist) {
    const GradedMap& phi = pres.relations;
    FreeGraded src = phi.source();
    for (std::size_t k = 0; k < columns.size(); ++k) src.twists.push_back(column_twist);
    GradedMap out(src, phi.target());
    for (std::size_t i = 0; i < phi.rows(); ++i) {
        for (std::size_t j = 0; j < phi.cols(); ++j) out.set(i, j, phi(i, j));
        for (std::size_t k = 0; k < columns.size(); ++k) out.set(i, phi.cols() + k, columns[k][i]);
    }
    return GradedPresentation{pres.base, std::move(out)};
}

// Rank and degree read off the Hilbert function at D, D+1, D+2.
inline std::optional<RankDegree> hilbert_line(const GradedPresentation& pres, int D) {
    const long h_a = static_cast<long>(module_piece_dim(pres, D));
    const long h_b = static_cast<long>(module_piece_dim(pres, D + 1));
    const long h_c = static_cast<long>(module_piece_dim(pres, D + 2));
    if (h_c - h_b != h_b - h_a) return std::nullopt;
    const long r = h_b - h_a;
    return RankDegree{static_cast<int>(r), h_a - r * (D + 1)};
}

}  // namespace detail

// Sub-line-bundle witness for a constant profile: a section s of E(-b)
// nowhere vanishing on every fiber, so O(b) -> E is a subbundle with
// quotient O(a), and E = O(a) + O(b).
struct SplitCertificate {
    SplittingType split;
    int ambient_twist = 0;             // s is recorded through u = x0^e s, v = x1^e s in M_{ambient}
    int shift = 0;                     // e
    std::vector<Form> section_x0;      // u, one form per generator
    std::vector<Form> section_x1;      // v
    GradedPresentation quotient;       // coker of (relations | u | v), a line bundle of degree a
};

inline std::optional<SplitCertificate> try_split_certificate(const BundleHandle& bundle) {
    bundle.require_rank_two();
    const SplittingProfile& profile = type_profile(bundle);
    if (!profile.is_constant()) return std::nullopt;
    const SplittingType t = profile.generic;
    const GradedPresentation& pres = bundle.presentation();
    const int d = static_cast<int>(-t.b);
    const SectionLatticeFamily fam = lattice_family(pres, d, d);
    const LatticeBasis& sections = fam.at(d);
    const int D = fam.ambient_twist;
    const int e = D - d;
    const FreeGraded& gens = pres.generators();

    std::vector<std::vector<Integer>> candidates;
    for (std::size_t j = 0; j < sections.rank(); ++j) {
        std::vector<Integer> c(sections.ambient);
        for (std::size_t i = 0; i < sections.ambient; ++i) c[i] = sections.basis(i, j);
        candidates.push_back(std::move(c));
    }
    if (sections.rank() == 2)
        for (long x = -2; x <= 2; ++x)
            for (long y = 1; y <= 2; ++y) {
                std::vector<Integer> c(sections.ambient);
                for (std::size_t i = 0; i < sections.ambient; ++i)
                    c[i] = sections.basis(i, 0) * x + sections.basis(i, 1) * y;
                candidates.push_back(std::move(c));
            }

    const IntegerMatrix x0e = scalar_multiplication_piece(gens, Form::x0_power(e), D);
    const IntegerMatrix x1e = scalar_multiplication_piece(gens, Form::x1_power(e), D);
    const IntegerMatrix phi_high = degree_piece(pres.relations, D + e);
    const IntegerMatrix v_system = hstack({&x0e, &phi_high}, gens.dim(D + e));

    for (const auto& c : candidates) {
        const auto u = detail::integral_solution(fam.coordinates, c);
        if (!u) continue;
        std::vector<Integer> rhs(gens.dim(D + e));
        for (std::size_t r = 0; r < rhs.size(); ++r)
            for (std::size_t k = 0; k < u->size(); ++k) rhs[r] += x1e(r, k) * (*u)[k];
        const auto vw = detail::integral_solution(v_system, rhs);
        if (!vw) continue;
        std::vector<Integer> v(vw->begin(), vw->begin() + static_cast<long>(gens.dim(D)));
        SplitCertificate cert;
        cert.split = t;
        cert.ambient_twist = D;
        cert.shift = e;
        cert.section_x0 = detail::element_forms(gens, D, *u);
        cert.section_x1 = detail::element_forms(gens, D, v);
        cert.quotient = detail::append_columns(pres, {cert.section_x0, cert.section_x1}, -D);
        const LocalFreenessReport lf = local_freeness(cert.quotient);
        if (!lf.locally_free || lf.rank != 1) continue;
        const int spread = std::max(0, detail::max_or(gens.twists, 0) + D);
        const auto line = detail::hilbert_line(cert.quotient, D + e + spread + 2);
        if (!line || line->rank != 1 || line->degree != t.a) continue;
        return cert;
    }
    return std::nullopt;
}

}  // namespace arithsurf
