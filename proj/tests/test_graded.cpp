#include <gtest/gtest.h>

#include <random>

#include "arithsurf/graded.hpp"
#include "arithsurf/oracles.hpp"

using namespace arithsurf;

namespace {

GradedMap hirzebruch_column(int n, const Form& f) {
    GradedMap phi(FreeGraded{{-n}}, FreeGraded{{0, 0, 0}});
    phi.set(0, 0, Form::x0_power(n));
    phi.set(1, 0, Form::x1_power(n));
    phi.set(2, 0, f);
    return phi;
}

GradedMap random_map(std::mt19937_64& rng, const FreeGraded& src, const FreeGraded& tgt) {
    GradedMap m(src, tgt);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m.set(i, j, oracle::random_form(rng, m.required_degree(i, j), -4, 4));
    return m;
}

FreeGraded random_free(std::mt19937_64& rng, std::size_t rank) {
    FreeGraded f;
    for (std::size_t i = 0; i < rank; ++i) f.twists.push_back(static_cast<int>(rng() % 7) - 3);
    return f;
}

}  // namespace

TEST(MonomialBasis, Examples) {
    EXPECT_EQ(monomial_basis(2), (std::vector<std::pair<int, int>>{{2, 0}, {1, 1}, {0, 2}}));
    EXPECT_EQ(monomial_basis(0), (std::vector<std::pair<int, int>>{{0, 0}}));
    EXPECT_TRUE(monomial_basis(-3).empty());
    for (int d = -4; d <= 6; ++d) EXPECT_EQ(monomial_basis(d).size(), static_cast<std::size_t>(std::max(0, d + 1)));
}

TEST(FreeGraded, DimensionFormula) {
    const FreeGraded f{{-2, 0, 3}};
    for (int d = -6; d <= 6; ++d) {
        std::size_t expect = 0;
        for (int a : f.twists) expect += static_cast<std::size_t>(std::max(0, a + d + 1));
        EXPECT_EQ(f.dim(d), expect);
    }
}

TEST(Form, ArithmeticAndText) {
    const Form a = parse_form("x0 + 2*x1", 1);
    const Form b = parse_form("x0 - x1", 1);
    EXPECT_EQ(form_text(a * b), "x0^2 + x0*x1 - 2*x1^2");
    EXPECT_EQ(form_text(Form::zero(3)), "0");
    EXPECT_EQ(parse_form(form_text(a * b), 2), a * b);
    EXPECT_THROW(a + Form::zero(2), DegreeMismatch);
    EXPECT_THROW(parse_form("x0^2", 1), DegreeMismatch);
    EXPECT_THROW(parse_form("", 1), InvalidInput);
    EXPECT_EQ(parse_form("5*x0*x1", 2).coeff(1), 5);
}

TEST(GradedMap, RejectsWrongDegree) {
    GradedMap phi(FreeGraded{{-1}}, FreeGraded{{0}});
    EXPECT_THROW(phi.set(0, 0, Form::x0_power(2)), DegreeMismatch);
    EXPECT_THROW(GradedMap(FreeGraded{{1}}, FreeGraded{{0}}, {Form::constant(1)}), DegreeMismatch);
    EXPECT_NO_THROW(GradedMap(FreeGraded{{1}}, FreeGraded{{0}}, {Form::zero(-1)}));
}

TEST(DegreePiece, MultiplicationByX0) {
    GradedMap phi(FreeGraded{{-1}}, FreeGraded{{0}});
    phi.set(0, 0, Form::x0_power(1));
    EXPECT_EQ(degree_piece(phi, 1), (IntegerMatrix{{1}, {0}}));
    EXPECT_EQ(degree_piece(phi, 2), (IntegerMatrix{{1, 0}, {0, 1}, {0, 0}}));
    EXPECT_EQ(degree_piece(phi, 0).cols(), 0u);
}

TEST(DegreePiece, ZeroMapShape) {
    GradedMap phi(FreeGraded{{-1, 0}}, FreeGraded{{0, 2}});
    const IntegerMatrix m = degree_piece(phi, 1);
    EXPECT_EQ(m.rows(), 2u + 4u);
    EXPECT_EQ(m.cols(), 1u + 2u);
    EXPECT_TRUE(m.is_zero());
}

TEST(DegreePiece, HirzebruchColumnStacksCoefficients) {
    const GradedMap phi = hirzebruch_column(2, parse_form("5*x0*x1", 2));
    // one source monomial in degree 2; each target block holds a coefficient column
    EXPECT_EQ(degree_piece(phi, 2), (IntegerMatrix{{1}, {0}, {0}, {0}, {0}, {1}, {0}, {5}, {0}}));
    EXPECT_EQ(degree_piece(phi, 0).cols(), 0u);
    EXPECT_EQ(degree_piece(phi, 0).rows(), 3u);
}

TEST(DegreePiece, CompositionCommutes) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const FreeGraded a = random_free(rng, 1 + rng() % 3), b = random_free(rng, 1 + rng() % 3),
                         c = random_free(rng, 1 + rng() % 3);
        const GradedMap psi = random_map(rng, a, b), phi = random_map(rng, b, c);
        const GradedMap comp = compose(phi, psi);
        for (int d = -4; d <= 5; ++d) EXPECT_EQ(degree_piece(comp, d), degree_piece(phi, d) * degree_piece(psi, d));
    }
}

TEST(ReduceMod, KillsFiveInColumn) {
    const GradedPresentation p{BaseRing::integers(), hirzebruch_column(2, parse_form("5*x0*x1", 2))};
    const GradedPresentation q = reduce_mod(p, 5);
    EXPECT_EQ(q.base, BaseRing::prime(5));
    EXPECT_TRUE(q.relations(2, 0).is_zero());
    EXPECT_EQ(q.relations(0, 0), Form::x0_power(2));
    EXPECT_THROW(reduce_mod(p, 6), CompositeModulus);
    EXPECT_THROW(reduce_mod(q, 5), InvalidInput);
}

TEST(ReduceMod, CommutesWithDegreePiece) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const GradedPresentation p{BaseRing::integers(), random_map(rng, random_free(rng, 2), random_free(rng, 3))};
        for (std::uint64_t prime : {2u, 3u, 7u}) {
            const GradedPresentation q = reduce_mod(p, prime);
            for (int d = -3; d <= 4; ++d) {
                IntegerMatrix expect = degree_piece(p.relations, d);
                for (std::size_t i = 0; i < expect.rows(); ++i)
                    for (std::size_t j = 0; j < expect.cols(); ++j) expect(i, j) = residue(expect(i, j), prime);
                EXPECT_EQ(degree_piece(q.relations, d), expect);
            }
        }
    }
}

TEST(Twist, ShiftsAllTwists) {
    const GradedPresentation p{BaseRing::integers(), hirzebruch_column(1, Form::zero(1))};
    EXPECT_EQ(twist(p, 0), p);
    const GradedPresentation t = twist(split_presentation({0, -3}), 3);
    EXPECT_EQ(t.generators().twists, (std::vector<int>{3, 0}));
    const GradedPresentation u = twist(p, 2);
    EXPECT_EQ(u.relation_twists().twists, (std::vector<int>{1}));
    EXPECT_EQ(u.generators().twists, (std::vector<int>{2, 2, 2}));
    EXPECT_EQ(degree_piece(u.relations, 0), degree_piece(p.relations, 2));
}
