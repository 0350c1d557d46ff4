#pragma once

// The acceptance run: eight criteria, each reported as one pass/fail line.

#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "arithsurf/json_io.hpp"
#include "arithsurf/oracles.hpp"

namespace arithsurf::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
    double budget = 0;  // seconds; 0 = no time limit

    std::string line() const {
        std::ostringstream os;
        os << (passed ? "[PASS] " : "[FAIL] ") << id << " " << name << " (" << std::fixed;
        os.precision(2);
        os << seconds << "s";
        if (budget > 0) os << " / limit " << budget << "s";
        os << "): " << detail;
        return os.str();
    }
};

namespace detail {

inline std::string profile_text(const SplittingProfile& p) {
    std::string s = "generic " + std::to_string(p.generic.type());
    for (const auto& [q, t] : p.jumps) s += ", " + to_decimal(q) + "->" + std::to_string(t.type());
    return s;
}

inline CriterionResult timed(int id, std::string name, double budget, const std::function<std::string(bool&)>& body) {
    CriterionResult r{id, std::move(name), true, "", 0, budget};
    const auto t0 = std::chrono::steady_clock::now();
    try {
        r.detail = body(r.passed);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget > 0 && r.seconds > budget) {
        r.passed = false;
        r.detail += " (over time limit)";
    }
    return r;
}

// A coprime pair (g, h) over F_p of the given degrees.
inline std::pair<Form, Form> random_coprime_pair(std::mt19937_64& rng, std::uint64_t p, int dg, int dh) {
    const long hi = static_cast<long>(p) - 1;
    for (;;) {
        Form g = oracle::random_form(rng, dg, 0, hi);
        Form h = oracle::random_form(rng, dh, 0, hi);
        if (g.coeff(0) == 0 && h.coeff(0) == 0) continue;
        if (g.coeff(dg) == 0 && h.coeff(dh) == 0) continue;
        // no common zero iff the ideal (g, h) fills degree dg + dh - 1
        const int top = std::max(0, dg + dh - 1);
        IntegerMatrix full(static_cast<std::size_t>(top + 1),
                           static_cast<std::size_t>(std::max(0, top - dg + 1) + std::max(0, top - dh + 1)));
        std::size_t col = 0;
        for (const Form* f : {&g, &h})
            for (int s = 0; s + f->degree() <= top; ++s, ++col)
                for (int j = 0; j <= f->degree(); ++j) full(static_cast<std::size_t>(s + j), col) = f->coeff(j);
        if (rank_over_prime(full, Integer(static_cast<unsigned long>(p))) == static_cast<std::size_t>(top + 1))
            return {g, h};
    }
}

inline std::vector<std::uint64_t> audit_primes(const std::set<std::uint64_t>& skip, std::size_t count) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t p : primes_up_to(1000)) {
        if (out.size() == count) break;
        if (!skip.count(p)) out.push_back(p);
    }
    return out;
}

}  // namespace detail

inline CriterionResult prescribed_types_reproduction() {
    return detail::timed(1, "prescribed-types reproduction", 30, [](bool& ok) {
        struct Case {
            int n;
            std::vector<std::pair<unsigned long, int>> jumps;
        };
        const std::vector<Case> cases = {{0, {{2, 1}, {3, 2}}}, {1, {{5, 3}}}, {2, {{2, 2}, {7, 1}}}};
        std::string detail;
        for (const auto& c : cases) {
            std::vector<PrescribedJump> js;
            SplittingProfile want{{-c.n - 1, -1}, {}};
            std::set<std::uint64_t> skip;
            for (auto [p, k] : c.jumps) {
                js.push_back({Integer(p), k, std::nullopt});
                want.jumps.emplace(Integer(p), SplittingType{-c.n - 1 - k, k - 1});
                skip.insert(p);
            }
            const BundleHandle b = prescribed_types(c.n, js);
            const SplittingProfile& got = type_profile(b);
            if (!(got == want)) ok = false;
            for (std::uint64_t q : detail::audit_primes(skip, 10))
                if (!(splitting_type(b, Integer(static_cast<unsigned long>(q))) == want.generic)) {
                    ok = false;
                    detail += " audit prime " + std::to_string(q) + " jumps;";
                }
            detail += " n=" + std::to_string(c.n) + ": " + detail::profile_text(got) + ";";
        }
        return detail;
    });
}

inline CriterionResult parity_and_h0(std::uint64_t seed = 20261019) {
    return detail::timed(2, "parity and 2h0 identities", 0, [seed](bool& ok) {
        std::mt19937_64 rng(seed);
        const std::vector<unsigned long> primes = {2, 3, 5, 7, 11, 13};
        std::size_t violations = 0, jumps_checked = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const int n = static_cast<int>(rng() % 4);
            std::vector<unsigned long> pool = primes;
            std::shuffle(pool.begin(), pool.end(), rng);
            const std::size_t count = 1 + rng() % 2;
            std::vector<PrescribedJump> js;
            for (std::size_t k = 0; k < count; ++k) {
                const int ni = 1 + static_cast<int>(rng() % 3);
                auto gh = detail::random_coprime_pair(rng, pool[k], ni, ni + n);
                js.push_back({Integer(pool[k]), ni, gh});
            }
            const BundleHandle b = prescribed_types(n, js);
            const BundleHandle normalized = normalize(b);
            const SplittingProfile& prof = type_profile(normalized);
            for (const auto& j : js) {
                ++jumps_checked;
                const long delta = prof.at(j.p).type() - prof.generic.type();
                const std::size_t h0_fiber = oracle::global_sections(reduce_mod(normalized.presentation(), j.p), 0);
                if (delta <= 0 || delta % 2 != 0 || delta != 2 * static_cast<long>(h0_fiber) || delta != 2 * j.n)
                    ++violations;
            }
            if (prof.jumps.size() != js.size()) ++violations;
            try {
                check_parity(b);
                check_type_h0(b);
            } catch (const Error&) {
                ++violations;
            }
        }
        ok = violations == 0;
        return std::to_string(jumps_checked) + " jumps over 100 bundles, " + std::to_string(violations) + " violations";
    });
}

inline CriterionResult normal_form_strings() {
    return detail::timed(3, "normal-form equation strings", 0, [](bool& ok) {
        const std::vector<std::pair<NormalForm, std::string>> cases = {
            {NormalForm(0, Form::zero(0)), "y0 + y1 = 0"},
            {NormalForm(1, Form::zero(1)), "x0*y0 + x1*y1 = 0"},
            {NormalForm(2, Form::monomial(2, 1, Integer(1))), "x0^2*y0 + x1^2*y1 + x0*x1*y2 = 0"},
            {NormalForm(2, Form::monomial(2, 1, Integer(5))), "x0^2*y0 + x1^2*y1 + 5*x0*x1*y2 = 0"},
        };
        std::string detail;
        for (const auto& [nf, want] : cases) {
            const EquationRecord rec = equation(nf);
            if (rec.text != want || !rec.smooth) {
                ok = false;
                detail += " got '" + rec.text + "' want '" + want + "';";
            }
        }
        return detail.empty() ? std::string("4 strings byte-match") : detail;
    });
}

inline CriterionResult jump_detection() {
    return detail::timed(4, "jump detection on equations", 10, [](bool& ok) {
        std::string detail;
        for (long m : {2L, 3L, 5L, 6L, 30L}) {
            const NormalForm nf(2, Form::monomial(2, 1, Integer(m)));
            const SplittingProfile prof = degree_profile(nf);
            const BundleHandle b = bundle_from_normal_form(nf);
            // monomial oracle: O(-2) -> O^3 by (x0^2, x1^2, m x0 x1) has a section
            // of E(-2) over F_p exactly when the third entry dies mod p
            std::set<Integer> oracle_jumps;
            for (std::uint64_t p : primes_up_to(60)) {
                const GradedPresentation fiber = reduce_mod(b.presentation(), Integer(static_cast<unsigned long>(p)));
                if (oracle::global_sections(fiber, -2) > 0) oracle_jumps.insert(Integer(static_cast<unsigned long>(p)));
            }
            std::set<Integer> divisors;
            for (const Integer& p : prime_divisors(Integer(m))) divisors.insert(p);
            std::set<Integer> found;
            bool types_ok = prof.generic.type() == 0;
            for (const auto& [p, t] : prof.jumps) {
                found.insert(p);
                types_ok = types_ok && t.type() == 2;
            }
            if (found != divisors || oracle_jumps != divisors || !types_ok) ok = false;
            detail += " m=" + std::to_string(m) + ": " + detail::profile_text(prof) + ";";
        }
        return detail;
    });
}

inline CriterionResult cohomology_oracle(std::uint64_t seed = 7) {
    return detail::timed(5, "h0 stabilization vs global-section oracle", 0, [seed](bool& ok) {
        std::mt19937_64 rng(seed);
        const std::vector<BaseRing> bases = {BaseRing::rationals(), BaseRing::prime(Integer(2)), BaseRing::prime(Integer(3)),
                                             BaseRing::prime(Integer(5)), BaseRing::prime(Integer(13))};
        std::size_t mismatches = 0, comparisons = 0, built = 0;
        while (built < 200) {
            const BaseRing base = bases[rng() % bases.size()];
            const std::size_t gens = 1 + rng() % 3;
            const std::size_t rels = rng() % (gens + 1);
            FreeGraded g, r;
            for (std::size_t i = 0; i < gens; ++i) g.twists.push_back(static_cast<int>(rng() % 13) - 6);
            const int top = *std::max_element(g.twists.begin(), g.twists.end());
            for (std::size_t j = 0; j < rels; ++j) r.twists.push_back(-6 + static_cast<int>(rng() % static_cast<unsigned>(top + 7)));
            GradedMap phi(r, g);
            for (std::size_t i = 0; i < gens; ++i)
                for (std::size_t j = 0; j < rels; ++j) {
                    const int deg = phi.required_degree(i, j);
                    if (deg < 0) continue;
                    Form f = oracle::random_form(rng, deg, -3, 3);
                    if (base.is_prime()) f = f.reduced(base.p);
                    phi.set(i, j, f);
                }
            const GradedPresentation pres{base, phi};
            if (!oracle::injective(pres)) continue;
            ++built;
            for (int d = -6; d <= 6; ++d) {
                ++comparisons;
                if (h0(pres, d).dimension != oracle::global_sections(pres, d)) ++mismatches;
            }
        }
        ok = mismatches == 0;
        return std::to_string(comparisons) + " comparisons on 200 presentations, " + std::to_string(mismatches) +
               " mismatches";
    });
}

inline CriterionResult del_pezzo_classification(std::uint64_t seed = 11) {
    return detail::timed(6, "del Pezzo classification", 0, [seed](bool& ok) {
        std::string detail;
        const std::vector<std::string> standard = {"", "1:0:0", "1:0:0,0:1:0", "1:0:0,0:1:0,0:0:1",
                                                   "1:0:0,0:1:0,0:0:1,1:1:1"};
        for (std::size_t r = 0; r < standard.size(); ++r) {
            const Classification c = classify(PointConfiguration::parse(standard[r]));
            if (c.k_squared != 9 - static_cast<int>(r)) ok = false;
            detail += " K2=" + std::to_string(c.k_squared);
        }
        const PositionVerdict bad = general_position(PointConfiguration::parse("1:0:0,0:1:0,0:0:1,2:3:5"));
        bool det2 = false;
        for (const auto& f : bad.failures)
            if (f.check == "triples" && f.indices == std::vector<std::size_t>{1, 2, 3} && f.value == 2) det2 = true;
        if (bad.passed || !det2) ok = false;
        detail += det2 ? "; [2:3:5] det-2 witness" : "; [2:3:5] witness missing";

        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<long> coord(-20, 20);
        std::size_t passes = 0, unwitnessed = 0, sweeps = 0;
        while (sweeps < 10000) {
            std::vector<ProjectivePoint> pts;
            bool zero = false;
            for (int k = 0; k < 5; ++k) {
                long x = coord(rng), y = coord(rng), z = coord(rng);
                if (x == 0 && y == 0 && z == 0) zero = true;
                if (!zero) pts.emplace_back(Integer(x), Integer(y), Integer(z));
            }
            if (zero) continue;
            ++sweeps;
            const PointConfiguration c(std::move(pts));
            if (general_position(c).passed) ++passes;
            bool rejected = false;
            try {
                standardize(c);
            } catch (const TooManyPoints&) {
                rejected = true;
            }
            const auto w = mod2_witness(c);
            if (!rejected || !w || !oracle::mod2_degenerate(c, w->indices)) ++unwitnessed;
        }
        if (passes != 0 || unwitnessed != 0) ok = false;
        detail += "; 10000 five-point sweeps: " + std::to_string(passes) + " passes, " + std::to_string(unwitnessed) +
                  " without a mod-2 witness";
        return detail;
    });
}

inline CriterionResult minus_one_counts() {
    return detail::timed(7, "(-1)-class counts", 0, [](bool& ok) {
        const std::vector<std::size_t> want = {1, 3, 6, 10};
        std::string detail;
        for (std::size_t r = 1; r <= 4; ++r) {
            const std::size_t got = minus_one_classes(r).size();
            const std::size_t box = oracle::minus_one_count_box(r, 3, 2);
            if (got != want[r - 1] || box != got) ok = false;
            detail += " r=" + std::to_string(r) + ":" + std::to_string(got) + "/" + std::to_string(box);
        }
        return detail;
    });
}

inline CriterionResult transformation_locality(std::uint64_t seed = 5) {
    return detail::timed(8, "transformation locality and factorization records", 0, [seed](bool& ok) {
        std::mt19937_64 rng(seed);
        const std::vector<unsigned long> primes = {2, 3, 5, 7, 11};
        std::size_t failures = 0, applied = 0;
        while (applied < 50) {
            const int a1 = -static_cast<int>(rng() % 3), a2 = a1 - static_cast<int>(rng() % 3);
            const BundleHandle split = split_bundle({a1, a2});
            // first step at p1 from the split source, second step measured at p2
            const unsigned long p1 = primes[rng() % primes.size()];
            const int m1 = a1 + static_cast<int>(rng() % 2);
            const auto gh1 = detail::random_coprime_pair(rng, p1, m1 - a1, m1 - a2);
            const TransformResult first = apply_with_inclusion(split, FiberQuotient::from_pair(Integer(p1), m1, gh1.first, gh1.second));
            unsigned long p2 = primes[rng() % primes.size()];
            while (p2 == p1) p2 = primes[rng() % primes.size()];
            const int m2 = a1 + static_cast<int>(rng() % 2);
            const auto gh2 = detail::random_coprime_pair(rng, p2, m2 - a1, m2 - a2);
            const GradedMap row = compose(GradedMap(FreeGraded{{a1, a2}}, FreeGraded{{m2}}, {gh2.first, gh2.second}), first.inclusion);
            FiberQuotient q{Integer(p2), m2, {}};
            for (std::size_t i = 0; i < row.cols(); ++i) q.row.push_back(row(0, i).reduced(p2));
            const BundleHandle& source = first.bundle;
            const BlowupFactorization rec = blowup_factorization(source, q);
            ++applied;
            const SplittingProfile& before = type_profile(source);
            const SplittingProfile& after = rec.target_profile;
            bool local = before.generic == after.generic;
            std::set<Integer> primes_seen;
            for (const auto& [p, t] : before.jumps) primes_seen.insert(p);
            for (const auto& [p, t] : after.jumps) primes_seen.insert(p);
            for (const Integer& p : primes_seen)
                if (p != q.p && !(before.at(p) == after.at(p))) local = false;
            const auto round = json::factorization_from(json::factorization(rec));
            const bool record_ok = round == rec && json::factorization(round).dump() == json::factorization(rec).dump();
            const SplittingType src_p = before.at(q.p), tgt_p = after.at(q.p);
            const bool degrees_ok = rec.center_V.twist == q.m && rec.center_V.relative_degree == q.m - src_p.b &&
                                    rec.center_U.twist == source.degree() - q.m &&
                                    rec.center_U.relative_degree == rec.center_U.twist - tgt_p.b &&
                                    tgt_p.degree() == src_p.degree();
            if (!local || !record_ok || !degrees_ok) ++failures;
        }
        ok = failures == 0;
        return std::to_string(applied) + " random transformations, " + std::to_string(failures) + " failures";
    });
}

inline std::vector<CriterionResult> run_all() {
    return {prescribed_types_reproduction(), parity_and_h0(),   normal_form_strings(),     jump_detection(),
            cohomology_oracle(),             del_pezzo_classification(), minus_one_counts(), transformation_locality()};
}

}  // namespace arithsurf::acceptance
