#include <gtest/gtest.h>

#include <random>

#include "arithsurf/hirzebruch.hpp"
#include "arithsurf/oracles.hpp"

using namespace arithsurf;

namespace {

NormalForm nf(int n, const std::string& f) { return NormalForm(n, parse_form(f, n)); }

std::map<Integer, long> type_map(const SplittingProfile& p) {
    std::map<Integer, long> out;
    for (const auto& [q, t] : p.jumps) out[q] = t.type();
    return out;
}

}  // namespace

TEST(Equation, DocumentedStrings) {
    EXPECT_EQ(equation(nf(1, "0")).text, "x0*y0 + x1*y1 = 0");
    EXPECT_EQ(equation(nf(0, "0")).text, "y0 + y1 = 0");
    EXPECT_EQ(equation(nf(2, "x0*x1")).text, "x0^2*y0 + x1^2*y1 + x0*x1*y2 = 0");
    EXPECT_EQ(equation(nf(2, "5*x0*x1")).text, "x0^2*y0 + x1^2*y1 + 5*x0*x1*y2 = 0");
    EXPECT_EQ(equation(nf(2, "-5*x0*x1")).text, "x0^2*y0 + x1^2*y1 - 5*x0*x1*y2 = 0");
    EXPECT_EQ(equation(nf(3, "x0^2*x1 + 2*x0*x1^2")).text, "x0^3*y0 + x1^3*y1 + (x0^2*x1 + 2*x0*x1^2)*y2 = 0");
}

TEST(Equation, BidegreeAndSmoothness) {
    const EquationRecord r = equation(nf(4, "7*x0^2*x1^2"));
    EXPECT_EQ(r.x_degree, 4);
    EXPECT_EQ(r.y_degree, 1);
    EXPECT_TRUE(r.smooth);
}

TEST(NormalForm, RejectsWrongDegree) {
    EXPECT_THROW(NormalForm(2, parse_form("x0", 1)), DegreeMismatch);
    EXPECT_THROW(NormalForm(-1, Form::zero(-1)), InvalidInput);
}

TEST(ReduceCoefficients, KillsExtremeCoefficients) {
    const NormalForm r = reduce_coefficients(nf(2, "3*x0^2 + x0*x1"));
    EXPECT_EQ(r.f, parse_form("x0*x1", 2));
    const NormalForm already = nf(3, "x0^2*x1 - x0*x1^2");
    EXPECT_EQ(reduce_coefficients(already).f, already.f);
}

TEST(ReduceCoefficients, ProfilesAgree) {
    for (const std::string f : {"3*x0^2 + 6*x0*x1 - 4*x1^2", "2*x0^2 + x1^2", "x0^2 + 10*x0*x1"}) {
        const NormalForm a = nf(2, f);
        const SplittingProfile before = degree_profile(a), after = degree_profile(reduce_coefficients(a));
        EXPECT_EQ(before.generic, after.generic) << f;
        EXPECT_EQ(before.jumps, after.jumps) << f;
    }
}

TEST(BundleFromNormalForm, Shape) {
    const BundleHandle b = bundle_from_normal_form(nf(3, "x0*x1^2"));
    EXPECT_EQ(b.rank(), 2);
    EXPECT_EQ(b.degree(), 3);
    EXPECT_EQ(b.presentation().generators().twists, (std::vector<int>{0, 0, 0}));
    EXPECT_EQ(b.presentation().relation_twists().twists, (std::vector<int>{-3}));
}

TEST(DegreeProfile, Examples) {
    const SplittingProfile one = degree_profile(nf(1, "0"));
    EXPECT_EQ(one.generic.type(), 1);
    EXPECT_TRUE(one.is_constant());
    const SplittingProfile five = degree_profile(nf(2, "5*x0*x1"));
    EXPECT_EQ(five.generic, (SplittingType{1, 1}));
    ASSERT_EQ(five.jumps.size(), 1u);
    EXPECT_EQ(five.at(5), (SplittingType{0, 2}));
    const SplittingProfile zero = degree_profile(nf(2, "0"));
    EXPECT_EQ(zero.generic, (SplittingType{0, 2}));
    EXPECT_TRUE(zero.is_constant());
    EXPECT_EQ(type_map(degree_profile(nf(2, "6*x0*x1"))), (std::map<Integer, long>{{2, 2}, {3, 2}}));
}

TEST(DegreeProfile, TypeOneAlwaysConstant) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const NormalForm a(1, oracle::random_form(rng, 1, -30, 30));
        const SplittingProfile p = degree_profile(a);
        EXPECT_EQ(p.generic.type(), 1);
        EXPECT_TRUE(p.is_constant()) << form_text(a.f);
    }
}

TEST(DegreeProfile, JumpsAgainstFiberOracle) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 2);
        const NormalForm a(n, oracle::random_form(rng, n, -12, 12));
        const BundleHandle b = bundle_from_normal_form(a);
        EXPECT_EQ(b.degree(), n);
        const SplittingProfile p = degree_profile(a);
        for (const auto& [q, t] : p.jumps) EXPECT_EQ((t.type() - p.generic.type()) % 2, 0);
        for (std::uint64_t q : primes_up_to(13)) {
            const auto fiber = oracle::rank_two_type(reduce_mod(b.presentation(), q), n);
            EXPECT_EQ(fiber.second - fiber.first, p.at(Integer(q)).type()) << form_text(a.f) << " p=" << q;
        }
    }
}

TEST(ConstancyCheck, Examples) {
    const auto one = constancy_check(nf(1, "0"));
    ASSERT_TRUE(one.has_value());
    EXPECT_EQ(one->split, (SplittingType{0, 1}));
    EXPECT_FALSE(constancy_check(nf(2, "5*x0*x1")).has_value());
    for (const std::string c : {"0", "1", "-7", "12"}) {
        const auto product = constancy_check(nf(0, c));
        ASSERT_TRUE(product.has_value()) << c;
        EXPECT_EQ(product->split.type(), 0);
    }
}
