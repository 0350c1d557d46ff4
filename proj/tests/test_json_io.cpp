#include <gtest/gtest.h>

#include "arithsurf/json_io.hpp"

using namespace arithsurf;
using Json = nlohmann::json;

namespace {

template <class T, class To, class From>
T round_trip(const T& value, To to, From from) {
    return from(Json::parse(to(value).dump()));
}

}  // namespace

TEST(JsonForm, RoundTripAndBigCoefficients) {
    const Form f = parse_form("123456789012345678901234567890*x0^2 - 7*x0*x1 + x1^2", 2);
    EXPECT_EQ(round_trip(f, json::form, json::form_from), f);
    const Json j = json::form(f);
    EXPECT_EQ(j["coeffs"][0], "123456789012345678901234567890");
    EXPECT_EQ(j["coeffs"][1], "-7");
    EXPECT_EQ(round_trip(Form::zero(-3), json::form, json::form_from), Form::zero(-3));
}

TEST(JsonForm, AcceptsNumbersAndRejectsBadShapes) {
    EXPECT_EQ(json::form_from(Json::parse(R"({"degree":1,"coeffs":[2,"-3"]})")), parse_form("2*x0 - 3*x1", 1));
    EXPECT_THROW(json::form_from(Json::parse(R"({"degree":2,"coeffs":["1"]})")), DegreeMismatch);
    EXPECT_THROW(json::form_from(Json::parse(R"({"degree":-1,"coeffs":["1"]})")), DegreeMismatch);
    EXPECT_THROW(json::form_from(Json::parse(R"({"coeffs":[]})")), InvalidInput);
    EXPECT_THROW(json::form_from(Json::parse(R"({"degree":0,"coeffs":["1x"]})")), InvalidInput);
}

TEST(JsonMatrix, RoundTrip) {
    IntegerMatrix m(2, 3);
    m(0, 0) = 4;
    m(0, 2) = Integer("-98765432109876543210");
    m(1, 1) = 6;
    EXPECT_EQ(round_trip(m, json::matrix, json::matrix_from), m);
    EXPECT_THROW(json::matrix_from(Json::parse(R"({"rows":2,"cols":2,"entries":["1"]})")), InvalidInput);
}

TEST(JsonPresentation, RoundTripOverEachBase) {
    GradedMap phi(FreeGraded{{-2}}, FreeGraded{{0, 0, 0}});
    phi.set(0, 0, Form::x0_power(2));
    phi.set(1, 0, Form::x1_power(2));
    phi.set(2, 0, parse_form("5*x0*x1", 2));
    const GradedPresentation z{BaseRing::integers(), phi};
    EXPECT_EQ(round_trip(z, json::presentation, json::presentation_from), z);
    const GradedPresentation f5 = reduce_mod(z, 5);
    EXPECT_EQ(round_trip(f5, json::presentation, json::presentation_from), f5);
    EXPECT_EQ(json::presentation(f5)["base"], "F5");
}

TEST(JsonPresentation, RejectsMismatchedEntries) {
    const Json bad = Json::parse(R"({"generators":[0,0],"relations":[-1],"entries":[[{"degree":1,"coeffs":["1","0"]}]]})");
    EXPECT_THROW(json::presentation_from(bad), InvalidInput);
    const Json wrong_degree =
        Json::parse(R"({"generators":[0],"relations":[-1],"entries":[[{"degree":2,"coeffs":["1","0","0"]}]]})");
    EXPECT_THROW(json::presentation_from(wrong_degree), DegreeMismatch);
    EXPECT_THROW(json::base_from("R"), InvalidInput);
}

TEST(JsonProfile, RoundTripWithLargePrime) {
    SplittingProfile p;
    p.generic = {-2, -1};
    p.jumps.emplace(Integer(3), SplittingType{-3, 0});
    p.jumps.emplace(Integer("1000000007"), SplittingType{-4, 1});
    const SplittingProfile back = round_trip(p, json::profile, json::profile_from);
    EXPECT_EQ(back.generic, p.generic);
    EXPECT_EQ(back.jumps, p.jumps);
    const Json report = json::profile_report(p);
    EXPECT_EQ(report["generic_type"], 1);
    EXPECT_EQ(report["jump_types"]["1000000007"], 5);
    EXPECT_THROW(json::splitting_from(Json::parse("1")), InvalidInput);
}

TEST(JsonQuotient, PairRowAndHorizontal) {
    const FiberQuotient pair{Integer(7), 1, {parse_form("x0^2", 2), parse_form("x1^3", 3)}};
    const Json j = json::quotient(pair);
    EXPECT_TRUE(j.contains("g"));
    EXPECT_EQ(j["p"], "7");
    const FiberQuotient back = json::quotient_from(Json::parse(j.dump()));
    EXPECT_EQ(back.p, pair.p);
    EXPECT_EQ(back.m, pair.m);
    EXPECT_EQ(back.row, pair.row);

    const FiberQuotient row{Integer(2), 0, {parse_form("x0", 1), parse_form("x1", 1), Form::zero(2)}};
    const Json jr = json::quotient(row);
    EXPECT_TRUE(jr.contains("row"));
    EXPECT_EQ(json::quotient_from(Json::parse(jr.dump())).row, row.row);

    EXPECT_THROW(json::quotient_from(Json::parse(R"({"center":"horizontal","m":0})")), UnsupportedCenter);
    EXPECT_THROW(json::quotient_from(Json::parse(R"({"p":"3"})")), InvalidInput);
}

TEST(JsonFactorization, RoundTripAndPrimeConsistency) {
    const BundleHandle b = split_bundle({-1, -2});
    const FiberQuotient q{Integer(3), 0, {Form::x0_power(1), Form::x1_power(2)}};
    const BlowupFactorization f = blowup_factorization(b, q);
    EXPECT_EQ(round_trip(f, json::factorization, json::factorization_from), f);
    Json tampered = json::factorization(f);
    tampered["center_U"]["p"] = "5";
    EXPECT_THROW(json::factorization_from(tampered), InvalidInput);
}

TEST(JsonConfiguration, RoundTrip) {
    const PointConfiguration c({ProjectivePoint::parse("1:0:0"), ProjectivePoint::parse("0:1:0"),
                                ProjectivePoint::parse("0:0:1"), ProjectivePoint::parse("1:1:1")});
    const PointConfiguration back = json::configuration_from(Json::parse(json::configuration(c).dump()));
    ASSERT_EQ(back.points().size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(back.points()[i].text(), c.points()[i].text());
}

TEST(JsonVerdict, WitnessFields) {
    const PointConfiguration bad({ProjectivePoint::parse("1:0:0"), ProjectivePoint::parse("0:1:0"),
                                  ProjectivePoint::parse("1:1:0")});
    const Json v = json::verdict(general_position(bad));
    EXPECT_FALSE(v["passed"].get<bool>());
    ASSERT_FALSE(v["witness"].is_null());
    EXPECT_EQ(v["witness"]["check"], "triples");
    EXPECT_EQ(v["witness"]["value"], "0");
    EXPECT_TRUE(v["witness"]["generic"].get<bool>());

    const PointConfiguration good({ProjectivePoint::parse("1:0:0"), ProjectivePoint::parse("0:1:0"),
                                   ProjectivePoint::parse("0:0:1")});
    const Json ok = json::verdict(general_position(good));
    EXPECT_TRUE(ok["passed"].get<bool>());
    EXPECT_TRUE(ok["witness"].is_null());
}

TEST(JsonLatticeClass, Shape) {
    const Json j = json::lattice_class(LatticeClass{1, {1, 1, 0}});
    EXPECT_EQ(j["d"], 1);
    EXPECT_EQ(j["m"], Json::parse("[1,1,0]"));
}
