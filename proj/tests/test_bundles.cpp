#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "arithsurf/acceptance.hpp"
#include "arithsurf/hirzebruch.hpp"
#include "arithsurf/oracles.hpp"
#include "arithsurf/transforms.hpp"

using namespace arithsurf;

namespace {

BundleHandle normal_form_bundle(int n, const std::string& f) {
    return bundle_from_normal_form(NormalForm(n, parse_form(f, n)));
}

std::map<Integer, long> type_map(const SplittingProfile& p) {
    std::map<Integer, long> out;
    for (const auto& [q, t] : p.jumps) out[q] = t.type();
    return out;
}

}  // namespace

TEST(SplittingType, SplitBundles) {
    for (int n = 0; n <= 4; ++n) {
        const SplittingType t = splitting_type(split_bundle({0, -n}));
        EXPECT_EQ(t, (SplittingType{-n, 0}));
        EXPECT_EQ(t.type(), n);
    }
}

TEST(SplittingType, NormalFormFiveAgainstOracle) {
    const BundleHandle b = normal_form_bundle(2, "5*x0*x1");
    EXPECT_EQ(splitting_type(b), (SplittingType{1, 1}));
    EXPECT_EQ(splitting_type(b, Integer(5)), (SplittingType{0, 2}));
    EXPECT_EQ(splitting_type(b, Integer(7)), (SplittingType{1, 1}));
    // oracle: first twist with sections, over Q and F5
    const auto q = oracle::rank_two_type(GradedPresentation{BaseRing::rationals(), b.presentation().relations}, 2);
    EXPECT_EQ(q, (std::pair<long, long>{1, 1}));
    const auto f5 = oracle::rank_two_type(reduce_mod(b.presentation(), 5), 2);
    EXPECT_EQ(f5, (std::pair<long, long>{0, 2}));
}

TEST(SplittingType, PrescribedTypesGenericIsNormalized) {
    for (int n = 0; n <= 3; ++n) {
        const BundleHandle b = prescribed_types(n, {PrescribedJump{7, 1, std::nullopt}});
        EXPECT_EQ(splitting_type(b), (SplittingType{-n - 1, -1}));
        EXPECT_TRUE(is_normalized(b));
    }
}

TEST(SplittingType, NonBundleIsRejected) {
    GradedMap two(FreeGraded{{0}}, FreeGraded{{0, 0}});
    two.set(0, 0, Form::constant(2));
    EXPECT_THROW(BundleHandle(GradedPresentation{BaseRing::integers(), two}), NotLocallyFree);
    EXPECT_THROW(splitting_type(split_bundle({0, 1, 2})), InvalidInput);
}

TEST(TypeProfile, PrescribedTwoThree) {
    const BundleHandle b = prescribed_types(0, {{2, 1, std::nullopt}, {3, 2, std::nullopt}});
    const SplittingProfile& p = type_profile(b);
    EXPECT_EQ(p.generic.type(), 0);
    EXPECT_EQ(type_map(p), (std::map<Integer, long>{{2, 2}, {3, 4}}));
}

TEST(TypeProfile, NormalFormExamples) {
    const SplittingProfile& a = type_profile(normal_form_bundle(1, "0"));
    EXPECT_EQ(a.generic.type(), 1);
    EXPECT_TRUE(a.is_constant());
    const SplittingProfile& b = type_profile(normal_form_bundle(2, "6*x0*x1"));
    EXPECT_EQ(b.generic.type(), 0);
    EXPECT_EQ(type_map(b), (std::map<Integer, long>{{2, 2}, {3, 2}}));
    // mod 2 and mod 3 oracle on the fibers
    const BundleHandle h = normal_form_bundle(2, "6*x0*x1");
    for (long p : {2L, 3L}) EXPECT_EQ(oracle::rank_two_type(reduce_mod(h.presentation(), p), 2).second, 2);
    EXPECT_EQ(oracle::rank_two_type(reduce_mod(h.presentation(), 5), 2).second, 1);
}

TEST(TypeProfile, JumpCompletenessOnUnlistedPrimes) {
    const BundleHandle b = prescribed_types(1, {{5, 1, std::nullopt}, {11, 2, std::nullopt}});
    const SplittingProfile& p = type_profile(b);
    ASSERT_EQ(p.jumps.size(), 2u);
    for (long q : {2L, 3L, 7L, 13L, 17L, 19L, 23L, 29L, 31L, 37L}) EXPECT_EQ(splitting_type(b, Integer(q)), p.generic);
}

TEST(TypeProfile, DegreeConstantAtEveryPoint) {
    const BundleHandle b = prescribed_types(2, {{2, 2, std::nullopt}, {7, 1, std::nullopt}});
    const SplittingProfile& p = type_profile(b);
    EXPECT_EQ(p.generic.degree(), b.degree());
    for (const auto& [q, t] : p.jumps) EXPECT_EQ(t.degree(), b.degree());
}

TEST(Normalize, TwistsAndIsIdempotent) {
    const BundleHandle s = normalize(split_bundle({0, 3}));
    EXPECT_EQ(splitting_type(s), (SplittingType{-4, -1}));
    const BundleHandle again = normalize(s);
    EXPECT_EQ(again.presentation(), s.presentation());
    const BundleHandle nf = normal_form_bundle(2, "30*x0*x1");
    const BundleHandle norm = normalize(nf);
    EXPECT_TRUE(is_normalized(norm));
    EXPECT_TRUE(type_profile(norm).same_types(type_profile(nf)));
}

TEST(Normalize, TypeMapTwistInvariant) {
    const BundleHandle b = normal_form_bundle(2, "6*x0*x1");
    for (int t = -3; t <= 3; ++t) {
        const BundleHandle tw(twist(b.presentation(), t));
        const SplittingProfile& p = type_profile(tw);
        EXPECT_TRUE(p.same_types(type_profile(b))) << "t=" << t;
        EXPECT_EQ(p.generic.a, type_profile(b).generic.a + t);
    }
}

TEST(Parity, Examples) {
    const auto e = check_parity(prescribed_types(1, {{2, 1, std::nullopt}}));
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0].prime, 2);
    EXPECT_EQ(e[0].delta, 2);
    EXPECT_TRUE(check_parity(split_bundle({0, -2})).empty());
}

TEST(TypeH0, Examples) {
    const auto e = check_type_h0(prescribed_types(0, {{5, 3, std::nullopt}}));
    ASSERT_EQ(e.size(), 1u);
    EXPECT_EQ(e[0].delta, 6);
    EXPECT_EQ(e[0].h0, 3u);
    const TypeH0Entry s = type_h0_at(split_bundle({-1, -3}), 7);
    EXPECT_EQ(s.delta, 0);
    EXPECT_EQ(s.h0, 0u);
}

TEST(Parity, RandomizedPrescribedBundles) {
    std::mt19937_64 rng(99);
    const std::vector<unsigned long> primes = {2, 3, 5, 7, 11, 13};
    for (int trial = 0; trial < 20; ++trial) {
        const int n = static_cast<int>(rng() % 4);
        std::vector<unsigned long> pool = primes;
        std::shuffle(pool.begin(), pool.end(), rng);
        const int ni = 1 + static_cast<int>(rng() % 3);
        auto gh = acceptance::detail::random_coprime_pair(rng, pool[0], ni, ni + n);
        const BundleHandle b = prescribed_types(n, {{Integer(pool[0]), ni, gh}});
        const auto parity = check_parity(b);
        const auto ident = check_type_h0(b);
        ASSERT_EQ(parity.size(), 1u);
        EXPECT_EQ(parity[0].delta, 2 * ni);
        ASSERT_EQ(ident.size(), 1u);
        EXPECT_EQ(ident[0].delta, 2 * static_cast<long>(ident[0].h0));
        // independent fiber h0 of the normalized twist
        EXPECT_EQ(oracle::global_sections(reduce_mod(normalize(b).presentation(), pool[0]), 0), ident[0].h0);
    }
}

TEST(SplitCertificate, Examples) {
    const auto c = try_split_certificate(normal_form_bundle(1, "0"));
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->split, (SplittingType{0, 1}));
    EXPECT_EQ(sheaf_rank_degree(c->quotient).rank, 1);
    EXPECT_EQ(sheaf_rank_degree(c->quotient).degree, 0);
    const auto s = try_split_certificate(split_bundle({-2, 1}));
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(s->split, (SplittingType{-2, 1}));
    EXPECT_FALSE(try_split_certificate(normal_form_bundle(2, "5*x0*x1")).has_value());
}

TEST(BundleHandle, ConcurrentProfileReadsAgree) {
    const BundleHandle b = prescribed_types(1, {{3, 1, std::nullopt}});
    std::vector<std::thread> threads;
    std::vector<std::map<Integer, long>> seen(4);
    for (std::size_t i = 0; i < seen.size(); ++i)
        threads.emplace_back([&, i] { seen[i] = type_map(type_profile(b)); });
    for (auto& t : threads) t.join();
    for (const auto& s : seen) EXPECT_EQ(s, (std::map<Integer, long>{{3, 3}}));
}
