#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "visnf/half_map.hpp"

using namespace visnf;

namespace {

Rational q(long n, long d = 1) { return scalar_traits<Rational>::from_fraction(n, d); }

}  // namespace

TEST_CASE("planar fold return map") {
    const auto hm = normal_half_map<Rational>(2, 6);
    REQUIRE(hm.P.ncomps() == 1);
    CHECK(hm.P.comp(0) == Jet<Rational>::variable(1, 6, 0).scaled(q(-1)));
    CHECK(hm.flight_time == Jet<Rational>::variable(1, 6, 0).scaled(q(-2)));

    // P is an involution on the nose
    const auto pp = compose(hm.P, hm.P);
    CHECK(pp.comp(0) == Jet<Rational>::variable(1, 6, 0));
}

TEST_CASE("return map fixes the extra surface directions") {
    const auto hm = normal_half_map<Rational>(4, 6);
    REQUIRE(hm.P.ncomps() == 3);
    CHECK(hm.P.comp(0) == Jet<Rational>::variable(3, 6, 0).scaled(q(-1)));
    CHECK(hm.P.comp(1) == Jet<Rational>::variable(3, 6, 1));
    CHECK(hm.P.comp(2) == Jet<Rational>::variable(3, 6, 2));
}

TEST_CASE("return map needs a surface") {
    CHECK_THROWS_AS(normal_half_map<Rational>(1, 6), input_error);
    CHECK_THROWS_AS(normal_half_map<Rational>(2, 0), input_error);
}

TEST_CASE("half map of the model fold through its own chart") {
    const int n = 6;
    const VectorField<Rational> x = model_contact_field<Rational>(1, 2, n);
    const auto nf = vishik_normal_form(x, Jet<Rational>::variable(2, n, 0), n);
    const auto hm = pullback_half_map(nf);
    CHECK(hm.Q.comp(0) == Jet<Rational>::variable(1, n, 0).scaled(q(-1)));
    CHECK(hm.involution_max == q(0));
    for (double v : hm.involution_residual)
        CHECK(v == 0.0);
    // linear coefficient of the planar half map is -1
    CHECK(hm.Q.comp(0).linear_coeff(0) == q(-1));
}

TEST_CASE("half map of a conjugated fold") {
    const int n = 6;
    const int m = 3;
    const auto x1 = Jet<Rational>::variable(m, n + 1, 0);
    const auto x2 = Jet<Rational>::variable(m, n + 1, 1);
    const auto x3 = Jet<Rational>::variable(m, n + 1, 2);
    const JetMap<Rational> g7{{x1 + x3 * x3, x2 - x1 * x3, x3 + x1 * x1}};
    const VectorField<Rational> x0 = model_contact_field<Rational>(1, m, n + 1);
    const VectorField<Rational> xc = pushforward(g7, x0);
    const Jet<Rational> hc = invert(g7.truncated(n)).comp(0);

    const auto nf = vishik_normal_form(xc, hc, n);
    REQUIRE(nf.k == 1);
    const auto hm = pullback_half_map(nf);

    // with exact coefficients the pulled-back map collapses to the model
    CHECK(hm.Q.comp(0) == Jet<Rational>::variable(m - 1, n, 0).scaled(q(-1)));
    CHECK(hm.Q.comp(1) == Jet<Rational>::variable(m - 1, n, 1));
    CHECK(hm.involution_max == q(0));

    const auto qq = compose(hm.Q, hm.Q);
    const auto id = JetMap<Rational>::identity(m - 1, n);
    for (int i = 0; i < m - 1; ++i)
        CHECK((qq.comp(i) - id.comp(i)).truncated(5).is_zero());
}

TEST_CASE("half maps refuse higher contact") {
    const int n = 6;
    const VectorField<Rational> x = model_contact_field<Rational>(2, 3, n);
    const auto nf = vishik_normal_form(x, Jet<Rational>::variable(3, n, 0), n);
    CHECK_THROWS_WITH_AS(pullback_half_map(nf), doctest::Contains("fold"), precondition_error);
}

TEST_CASE("float fold half map stays near the involution") {
    const int n = 6;
    const int m = 2;
    const auto x1 = Jet<double>::variable(m, n + 1, 0);
    const auto x2 = Jet<double>::variable(m, n + 1, 1);
    const JetMap<double> g7{{x1 + x2 * x2, x2 - x1 * x1}};
    const VectorField<double> x0 = model_contact_field<double>(1, m, n + 1);
    const VectorField<double> xc = pushforward(g7, x0);
    const Jet<double> hc = invert(g7.truncated(n)).comp(0);

    const auto nf = vishik_normal_form(xc, hc, n);
    const auto hm = pullback_half_map(nf);
    CHECK(hm.involution_max < 1e-8);
    CHECK(std::abs(hm.Q.comp(0).linear_coeff(0) + 1.0) < 1e-10);
}
