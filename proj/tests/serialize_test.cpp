#include "iwa/serialize.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace iwa;
using iwa_test::Rng;

namespace {

SeriesPrecision prec3(int n = 8, int m = 32) { return SeriesPrecision(3, n, m); }

}  // namespace

TEST(ParseSeries, PolynomialExpressions) {
    auto prec = prec3();
    EXPECT_EQ(parse_series("3 + 3*T + T^2", prec), cyclotomic_gamma(3, 1, prec));
    EXPECT_EQ(parse_series("3+3T+T^2", prec), cyclotomic_gamma(3, 1, prec));
    EXPECT_EQ(parse_series("T", prec), IwasawaSeries::variable(prec));
    EXPECT_EQ(parse_series("7", prec), IwasawaSeries::constant(prec, 7));
    EXPECT_EQ(parse_series("1 - T", prec),
              IwasawaSeries::one(prec) - IwasawaSeries::variable(prec));
    EXPECT_EQ(parse_series("-T + 5", prec),
              IwasawaSeries::constant(prec, 5) - IwasawaSeries::variable(prec));
    EXPECT_EQ(parse_series("T^3 + 3*T^2 + 3*T", prec), omega(3, 1, prec));
}

TEST(ParseSeries, CoefficientLists) {
    auto prec = prec3();
    EXPECT_EQ(parse_series("[3, 3, 1]", prec), cyclotomic_gamma(3, 1, prec));
    EXPECT_EQ(parse_series("[\"3\", \"3\", \"1\"]", prec), cyclotomic_gamma(3, 1, prec));
    EXPECT_EQ(parse_series("[0]", prec), IwasawaSeries(prec));
}

TEST(ParseSeries, Errors) {
    auto prec = prec3(8, 4);
    EXPECT_THROW(parse_series("T^9", prec), DegreeCapExceeded);
    EXPECT_THROW(parse_series("[1,1,1,1,1]", prec), DegreeCapExceeded);
    EXPECT_THROW(parse_series("3 +", prec), ParseError);
    EXPECT_THROW(parse_series("x + 1", prec), ParseError);
    EXPECT_THROW(parse_series("", prec), ParseError);
    EXPECT_THROW(parse_series("[1, true]", prec), ParseError);
}

TEST(SeriesToString, RoundTrip) {
    Rng rng(61);
    auto prec = prec3();
    EXPECT_EQ(series_to_string(IwasawaSeries(prec)), "0");
    EXPECT_EQ(series_to_string(cyclotomic_gamma(3, 1, prec)), "3 + 3*T + T^2");
    EXPECT_EQ(series_to_string(IwasawaSeries::variable(prec)), "T");
    for (int trial = 0; trial < 50; ++trial) {
        IwasawaSeries f = rng.random_series(prec);
        EXPECT_EQ(parse_series(series_to_string(f), prec), f);
    }
}

TEST(JsonRoundTrip, DomainTypes) {
    Rng rng(62);
    auto prec = prec3();
    for (int trial = 0; trial < 30; ++trial) {
        PadicInt a(3, 8, rng.below(p_power(3, 8)));
        EXPECT_EQ(padic_from_json(to_json(a)), a);

        IwasawaSeries f = rng.random_series(prec);
        EXPECT_EQ(series_from_json(to_json(f)), f);

        FractionElement x(rng.random_series_with_ord(prec, 2),
                          rng.random_series_with_ord(prec, 1));
        FractionElement back = fraction_from_json(to_json(x));
        EXPECT_EQ(back.num(), x.num());
        EXPECT_EQ(back.den(), x.den());
    }
}

// Serialize -> parse -> serialize is the identity on the JSON text.
TEST(JsonRoundTrip, StableDump) {
    auto prec = prec3();
    nlohmann::json j = to_json(cyclotomic_gamma(3, 2, prec));
    std::string s = j.dump(2);
    EXPECT_EQ(nlohmann::json::parse(s).dump(2), s);
}

TEST(ModuleFromToml, WorkedSchema) {
    auto prec = prec3();
    toml::Table t = toml::parse(R"(
p_part = [1]
poly_part = [
  {kind = "cyclotomic", i = 1, beta = 1},
  {kind = "coeffs", coeffs = [0, 3, 3, 1], beta = 2},
]
)");
    ElementaryModule m = module_from_toml(t, prec);
    EXPECT_EQ(m.p_part(), std::vector<int>{1});
    ASSERT_EQ(m.poly_part().size(), 2u);
    EXPECT_EQ(m.poly_part()[0].f, cyclotomic_gamma(3, 1, prec));
    EXPECT_EQ(m.poly_part()[1].beta, 2);
    EXPECT_EQ(m.poly_part()[1].f, omega(3, 1, prec));
}

TEST(ScenarioFromToml, WorkedSchema) {
    toml::Table t = toml::parse(R"(
p = 3
curve = "5692A1"

[reduction]
primes_over_p = [{kind = "good_ordinary"}]

[corank]
Q = 2
Q1 = 6
Q2 = 12

[tower]
m = 11
levels = 2

[analytic]
F1 = 2
)");
    Scenario scn = scenario_from_toml(t);
    EXPECT_EQ(scn.p, 3);
    EXPECT_EQ(scn.curve_label, "5692A1");
    ASSERT_EQ(scn.reduction.primes_over_p.size(), 1u);
    EXPECT_EQ(scn.reduction.primes_over_p[0].kind, ReductionKind::GoodOrdinary);
    EXPECT_EQ(scn.corank.at("Q2"), 12);
    ASSERT_TRUE(scn.tower.has_value());
    EXPECT_EQ(scn.tower->m, 11);
    EXPECT_EQ(scn.analytic_orders.at("F1"), 2);
}

TEST(ScenarioFromToml, EulerSection) {
    toml::Table t = toml::parse(R"(
p = 3

[euler]
r_L = 2
gamma_index = 3
v_reg = 1
v_sha = 0
v_torsion = 1
v_tamagawa = [1, 0]
v_d = [1]
v_lvalues = -1
)");
    Scenario scn = scenario_from_toml(t);
    ASSERT_TRUE(scn.euler.has_value());
    EXPECT_EQ(euler_leading_valuation(*scn.euler, scn.p), 2 + 1 + 0 - 2 + 1 + 2 - 1);
}

TEST(ScenarioFromToml, BadInputs) {
    EXPECT_THROW(scenario_from_toml(toml::parse("curve = \"x\"")), MissingData);
    EXPECT_THROW(scenario_from_toml(toml::parse(
                     "p = 3\n[reduction]\nprimes_over_p = [{kind = \"weird\"}]")),
                 ParseError);
    EXPECT_THROW(scenario_from_toml(toml::parse(
                     "p = 3\n[reduction]\nprimes_over_p = [{kind = \"split_mult\"}]")),
                 MissingData);
}
