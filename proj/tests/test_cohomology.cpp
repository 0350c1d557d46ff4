#include <gtest/gtest.h>

#include <random>

#include "arithsurf/cohomology.hpp"
#include "arithsurf/oracles.hpp"
#include "arithsurf/transforms.hpp"

using namespace arithsurf;

namespace {

GradedPresentation hirzebruch_cokernel(int n, const Form& f) {
    GradedMap phi(FreeGraded{{-n}}, FreeGraded{{0, 0, 0}});
    phi.set(0, 0, Form::x0_power(n));
    phi.set(1, 0, Form::x1_power(n));
    phi.set(2, 0, f);
    return {BaseRing::integers(), phi};
}

// random presentation with injective relations, twists in [-6, 6]
GradedPresentation random_presentation(std::mt19937_64& rng, const BaseRing& base) {
    for (;;) {
        const std::size_t gens = 1 + rng() % 3, rels = rng() % (gens + 1);
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
        GradedPresentation pres{base, phi};
        if (oracle::injective(pres)) return pres;
    }
}

}  // namespace

TEST(H0, DocumentedExamples) {
    EXPECT_EQ(h0(split_presentation({0}), 3).dimension, 4u);
    for (int n = 0; n <= 3; ++n) EXPECT_EQ(h0(split_presentation({-1, -n - 1}), 0).dimension, 0u);
}

TEST(H0, PrescribedTypesFiberAtJumpPrime) {
    for (int ni = 1; ni <= 3; ++ni) {
        const BundleHandle b = normalize(prescribed_types(1, {PrescribedJump{5, ni, std::nullopt}}));
        EXPECT_EQ(h0(reduce_mod(b.presentation(), 5), 0).dimension, static_cast<std::size_t>(ni));
        EXPECT_EQ(h0(reduce_mod(b.presentation(), 7), 0).dimension, 0u);
    }
}

TEST(H0, TorsionFreeCokernelOfHirzebruchColumn) {
    const GradedPresentation p = hirzebruch_cokernel(2, parse_form("5*x0*x1", 2));
    // E = O(1) + O(1) generically, O + O(2) over 5
    EXPECT_EQ(h0(p, -1).dimension, 2u);
    EXPECT_EQ(h0(p, 0).dimension, 4u);
    EXPECT_EQ(h0(reduce_mod(p, 5), -1).dimension, 2u);
    EXPECT_EQ(h0(reduce_mod(p, 5), -2).dimension, 1u);
    EXPECT_EQ(h0(p, -2).dimension, 0u);
}

TEST(SheafRankDegree, DocumentedExamples) {
    for (int n = 0; n <= 3; ++n) {
        const RankDegree s = sheaf_rank_degree(split_presentation({0, -n}));
        EXPECT_EQ(s.rank, 2);
        EXPECT_EQ(s.degree, -n);
        const RankDegree h = sheaf_rank_degree(hirzebruch_cokernel(n, Form::zero(n)));
        EXPECT_EQ(h.rank, 2);
        EXPECT_EQ(h.degree, n);
    }
    const RankDegree o = sheaf_rank_degree(split_presentation({0}));
    EXPECT_EQ(o.rank, 1);
    EXPECT_EQ(o.degree, 0);
}

TEST(H1, DocumentedExamples) {
    for (int n = -1; n <= 4; ++n) EXPECT_EQ(h1(split_presentation({n}), 0), 0);
    EXPECT_EQ(h1(split_presentation({-2}), 0), 1);
    for (int n = 0; n <= 2; ++n) EXPECT_EQ(h1(split_presentation({-n - 2}), 0), n + 1);
}

TEST(H1, EulerCharacteristicOverEveryBase) {
    const GradedPresentation p = hirzebruch_cokernel(2, parse_form("6*x0*x1", 2));
    for (const GradedPresentation& q : {p, reduce_mod(p, 2), reduce_mod(p, 3), reduce_mod(p, 5)}) {
        const RankDegree rd = sheaf_rank_degree(q);
        for (int d = -5; d <= 4; ++d) {
            const long lhs = static_cast<long>(h0(q, d).dimension) - h1(q, d);
            EXPECT_EQ(lhs, rd.rank * (d + 1) + rd.degree) << "d=" << d;
        }
    }
}

TEST(H0, SemicontinuityUnderReduction) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const GradedPresentation p = random_presentation(rng, BaseRing::integers());
        for (std::uint64_t prime : {2u, 3u, 5u}) {
            const GradedPresentation q = reduce_mod(p, prime);
            if (!oracle::injective(q)) continue;
            for (int d = -4; d <= 4; ++d) EXPECT_GE(h0(q, d).dimension, h0(p, d).dimension);
        }
    }
}

TEST(H0, OracleEquivalenceRandomized) {
    std::mt19937_64 rng(23);
    const std::vector<BaseRing> bases = {BaseRing::rationals(), BaseRing::prime(2), BaseRing::prime(3),
                                         BaseRing::prime(5), BaseRing::prime(13)};
    for (int trial = 0; trial < 60; ++trial) {
        const GradedPresentation p = random_presentation(rng, bases[rng() % bases.size()]);
        for (int d = -6; d <= 6; ++d)
            ASSERT_EQ(h0(p, d).dimension, oracle::global_sections(p, d)) << "trial " << trial << " d " << d;
    }
}

TEST(LatticeFamily, SplitTrivialWindow) {
    const SectionLatticeFamily fam = lattice_family(split_presentation({0, 0}), 0, 1);
    EXPECT_EQ(fam.at(0).rank(), 2u);
    EXPECT_EQ(fam.at(1).rank(), 4u);
    ASSERT_EQ(fam.times_x0.size(), 1u);
    EXPECT_EQ(rank_rational(fam.times_x0[0]), 2u);
    EXPECT_EQ(rank_rational(fam.times_x1[0]), 2u);
}

TEST(LatticeFamily, RanksMatchH0AndLatticesAreSaturated) {
    const BundleHandle b = normalize(prescribed_types(2, {PrescribedJump{3, 1, std::nullopt}}));
    const GradedPresentation& p = b.presentation();
    const SectionLatticeFamily fam = lattice_family(p, -1, 4);
    for (int d = -1; d <= 4; ++d) {
        EXPECT_EQ(fam.at(d).rank(), h0(p, d).dimension);
        // generic type (-1, -3): h0 = max(0, d) + max(0, d - 2)
        EXPECT_EQ(fam.at(d).rank(), static_cast<std::size_t>(std::max(0, d) + std::max(0, d - 2)));
        if (fam.at(d).rank() > 0)
            for (const auto& inv : smith_invariants(fam.at(d).basis)) EXPECT_EQ(inv, 1);
    }
}

TEST(LocalFreeness, DetectsTorsion) {
    // coker(x0 : O(-1) -> O) is a skyscraper
    GradedMap tors(FreeGraded{{-1}}, FreeGraded{{0}});
    tors.set(0, 0, Form::x0_power(1));
    EXPECT_THROW(verify_locally_free({BaseRing::integers(), tors}), NotLocallyFree);
    // coker(2 : O -> O) is supported on the fiber over 2
    GradedMap two(FreeGraded{{0}}, FreeGraded{{0, 1}});
    two.set(0, 0, Form::constant(2));
    const LocalFreenessReport rep = local_freeness({BaseRing::integers(), two});
    EXPECT_FALSE(rep.locally_free);
    EXPECT_EQ(rep.bad_primes, std::vector<Integer>{2});
    EXPECT_NO_THROW(verify_locally_free(hirzebruch_cokernel(2, parse_form("5*x0*x1", 2))));
}
