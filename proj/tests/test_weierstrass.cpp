#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "visnf/lcg.hpp"
#include "visnf/normal_form.hpp"  // jet_power for the identity checks
#include "visnf/weierstrass.hpp"

using namespace visnf;

namespace {

Rational q(long n, long d = 1) { return scalar_traits<Rational>::from_fraction(n, d); }

// g - q*d - sum t^i r_i, assembled in the divisor's variables.
Jet<Rational> division_defect(const Jet<Rational>& g, const Jet<Rational>& d, int s,
                              const DivisionResult<Rational>& div) {
    const int n = g.order();
    const int gv = g.nvars();
    const int dv = d.nvars();
    std::vector<int> emb_g(gv);
    emb_g[0] = 0;
    for (int v = 1; v < gv; ++v)
        emb_g[v] = v + 1;
    Jet<Rational> lhs = g.embedded(dv, emb_g) - div.quotient.assume_polynomial(n) * d;
    std::vector<int> emb_r(gv);
    for (int v = 0; v < gv; ++v)
        emb_r[v] = v + 1;
    for (int i = 0; i < s; ++i)
        lhs -= detail::jet_power(Jet<Rational>::variable(dv, n, 0), i) *
               div.remainders[static_cast<std::size_t>(i)].embedded(dv, emb_r)
                   .assume_polynomial(n);
    return lhs;
}

}  // namespace

TEST_CASE("dividing t^2 by t^2 + x - u") {
    const int n = 5;
    Jet<Rational> g(2, n);
    g.add_term({2, 0}, q(1));
    Jet<Rational> d(3, n);
    d.add_term({2, 0, 0}, q(1));
    d.add_term({0, 0, 1}, q(1));
    d.add_term({0, 1, 0}, q(-1));
    const auto div = weierstrass_divide(g, d, 2);

    CHECK(div.quotient == Jet<Rational>::constant(3, n - 2, q(1)));
    Jet<Rational> r0(2, n);
    r0.add_term({1, 0}, q(1));
    r0.add_term({0, 1}, q(-1));
    CHECK(div.remainders[0] == r0);
    CHECK(div.remainders[1].is_zero());
    CHECK(division_defect(g, d, 2, div).is_zero());
}

TEST_CASE("dividing t by t^2 - u leaves it in the remainder") {
    const int n = 4;
    Jet<Rational> g(1, n);
    g.add_term({1}, q(1));
    Jet<Rational> d(2, n);
    d.add_term({2, 0}, q(1));
    d.add_term({0, 1}, q(-1));
    const auto div = weierstrass_divide(g, d, 2);
    CHECK(div.quotient.is_zero());
    CHECK(div.remainders[0].is_zero());
    CHECK(div.remainders[1] == Jet<Rational>::constant(1, n - 1, q(1)));
}

TEST_CASE("dividing t^3 by t^2 - u") {
    const int n = 5;
    Jet<Rational> g(1, n);
    g.add_term({3}, q(1));
    Jet<Rational> d(2, n);
    d.add_term({2, 0}, q(1));
    d.add_term({0, 1}, q(-1));
    const auto div = weierstrass_divide(g, d, 2);
    CHECK(div.quotient == Jet<Rational>::variable(2, n - 2, 0));
    CHECK(div.remainders[0].is_zero());
    CHECK(div.remainders[1] == Jet<Rational>::variable(1, n - 1, 0));
    CHECK(division_defect(g, d, 2, div).is_zero());
}

TEST_CASE("divisor regularity is enforced") {
    const int n = 4;
    Jet<Rational> g(1, n);
    g.add_term({2}, q(1));
    Jet<Rational> d(2, n);
    d.add_term({1, 0}, q(1));  // pure-t part starts at t, not t^2
    d.add_term({0, 1}, q(-1));
    CHECK_THROWS_AS(weierstrass_divide(g, d, 2), precondition_error);
}

TEST_CASE("divisor variable count is checked") {
    Jet<Rational> g(2, 4);
    g.add_term({2, 0}, q(1));
    Jet<Rational> d(2, 4);
    d.add_term({2, 0}, q(1));
    CHECK_THROWS_AS(weierstrass_divide(g, d, 2), input_error);
}

TEST_CASE("preparing t^2") {
    const int n = 6;
    Jet<Rational> phi(1, n);
    phi.add_term({2}, q(1));
    const auto prep = prepare(phi, 2);
    REQUIRE(prep.a.size() == 1);
    CHECK(prep.a[0].is_zero());
    CHECK(prep.b == Jet<Rational>::variable(1, n, 0));
}

TEST_CASE("preparing t^2 + x") {
    const int n = 6;
    Jet<Rational> phi(2, n);
    phi.add_term({2, 0}, q(1));
    phi.add_term({0, 1}, q(1));
    const auto prep = prepare(phi, 2);
    REQUIRE(prep.a.size() == 1);
    CHECK(prep.a[0].is_zero());
    Jet<Rational> want(2, n);  // b(u, x) = u - x
    want.add_term({1, 0}, q(1));
    want.add_term({0, 1}, q(-1));
    CHECK(prep.b == want);
}

TEST_CASE("preparing t^3 + x t + y") {
    const int n = 6;
    Jet<Rational> phi(3, n);
    phi.add_term({3, 0, 0}, q(1));
    phi.add_term({1, 1, 0}, q(1));
    phi.add_term({0, 0, 1}, q(1));
    const auto prep = prepare(phi, 3);
    REQUIRE(prep.a.size() == 2);

    // a_1 = x, a_2 = 0, b = u - y  in the (u, x, y) ordering
    Jet<Rational> a1(3, n - 1);
    a1.add_term({0, 1, 0}, q(1));
    CHECK(prep.a[0] == a1);
    CHECK(prep.a[1].is_zero());
    Jet<Rational> b(3, n);
    b.add_term({1, 0, 0}, q(1));
    b.add_term({0, 0, 1}, q(-1));
    CHECK(prep.b == b);
}

TEST_CASE("preparation rejects the wrong vanishing pattern") {
    const int n = 5;
    Jet<Rational> phi(1, n);
    phi.add_term({1}, q(1));
    phi.add_term({2}, q(1));
    CHECK_THROWS_AS(prepare(phi, 2), precondition_error);
}

TEST_CASE("random divisions satisfy the identity and repeat exactly") {
    Lcg rng(31);
    const int n = 6;
    for (int trial = 0; trial < 12; ++trial) {
        const int s = static_cast<int>(rng.range(1, 3));
        const int nx = static_cast<int>(rng.range(1, 2));
        const int gv = 1 + nx;
        const int dv = 2 + nx;

        Jet<Rational> g(gv, n);
        for (int t = 0; t < 6; ++t) {
            Exponent e(gv, 0);
            const int deg = static_cast<int>(rng.range(0, n));
            for (int sdeg = 0; sdeg < deg; ++sdeg)
                e[static_cast<std::size_t>(rng.range(0, gv - 1))] += 1;
            g.add_term(e, q(rng.range(-3, 3)));
        }

        Jet<Rational> d(dv, n);
        Exponent ts(dv, 0);
        ts[0] = s;
        d.add_term(ts, q(1 + rng.range(0, 2)));
        for (int t = 0; t < 4; ++t) {
            Exponent e(dv, 0);
            const int deg = 1 + static_cast<int>(rng.range(0, n - 1));
            for (int sdeg = 0; sdeg < deg; ++sdeg)
                e[static_cast<std::size_t>(rng.range(0, dv - 1))] += 1;
            bool pure_t = true;
            for (int v = 1; v < dv; ++v)
                pure_t = pure_t && e[static_cast<std::size_t>(v)] == 0;
            if (pure_t && e[0] < s)
                continue;
            d.add_term(e, q(rng.range(-2, 2)));
        }

        const auto div = weierstrass_divide(g, d, s);
        CHECK(division_defect(g, d, s, div).is_zero());
        const auto again = weierstrass_divide(g, d, s);
        CHECK(again.quotient == div.quotient);
        for (int i = 0; i < s; ++i)
            CHECK(again.remainders[static_cast<std::size_t>(i)] ==
                  div.remainders[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("prepared data substitutes back to the prepared relation") {
    // t^s + sum a_i t^i - b equals q * (phi - u), so it must vanish as a
    // jet after substituting u = phi(t, x).
    const int n = 6;
    Jet<Rational> phi(2, n);
    phi.add_term({2, 0}, q(1));
    phi.add_term({1, 1}, q(1));
    phi.add_term({0, 2}, q(-1));
    const auto prep = prepare(phi, 2);

    // t^2 + a_1(phi, x) t - b(phi, x) should vanish along u = phi(t, x)
    const int s = 2;
    std::vector<Jet<Rational>> subst_comps;  // (u, x) <- (phi(t,x), x)
    subst_comps.push_back(phi);
    subst_comps.push_back(Jet<Rational>::variable(2, n, 1));
    const JetMap<Rational> subst{subst_comps};

    Jet<Rational> rel = detail::jet_power(Jet<Rational>::variable(2, n, 0), s);
    rel += Jet<Rational>::variable(2, n, 0) * compose(prep.a[0].assume_polynomial(n), subst);
    rel -= compose(prep.b, subst);
    CHECK(rel.is_zero());
}
