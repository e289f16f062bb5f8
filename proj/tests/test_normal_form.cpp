#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "visnf/normal_form.hpp"
#include "visnf/vector_field.hpp"

using namespace visnf;

namespace {

Rational q(long n, long d = 1) { return scalar_traits<Rational>::from_fraction(n, d); }

JetMap<Rational> fold_model(int n) { return model_contact_field<Rational>(1, 2, n); }

// model pair in dimension m pushed through a cubic unimodular map
struct Pair {
    VectorField<Rational> field;
    Jet<Rational> surface;
};

Pair conjugate_model(const JetMap<Rational>& g7, int k, int m, int n) {
    const VectorField<Rational> x0 = model_contact_field<Rational>(k, m, n + 1);
    return Pair{pushforward(g7, x0), invert(g7.truncated(n)).comp(0)};
}

bool residuals_vanish(const NormalFormResult<Rational>& nf) {
    for (int i = 0; i < nf.residual_field.ncomps(); ++i)
        if (!nf.residual_field.comp(i).is_zero())
            return false;
    return nf.residual_surface.is_zero();
}

}  // namespace

TEST_CASE("model field components") {
    const auto x = model_contact_field<Rational>(2, 4, 5);
    CHECK(x.comp(0) == Jet<Rational>::variable(4, 5, 1));
    CHECK(x.comp(1) == Jet<Rational>::variable(4, 5, 2));
    CHECK(x.comp(2) == Jet<Rational>::constant(4, 5, q(1)));
    CHECK(x.comp(3).is_zero());
}

TEST_CASE("model surface polynomial") {
    // k = 2: x1^3 + x2 x1 + x3
    const auto s = contact_surface_polynomial<Rational>(2, 3, 4);
    Jet<Rational> want(3, 4);
    want.add_term({3, 0, 0}, q(1));
    want.add_term({1, 1, 0}, q(1));
    want.add_term({0, 0, 1}, q(1));
    CHECK(s == want);
}

TEST_CASE("flow box of the fold model") {
    const int n = 6;
    const auto frame = flow_box_frame(fold_model(n));
    CHECK(frame.axis == 1);

    Jet<Rational> a0(2, n);
    a0.add_term({0, 1}, q(1));
    Jet<Rational> a1(2, n);
    a1.add_term({1, 0}, q(1));
    a1.add_term({0, 2}, q(-1, 2));
    CHECK(frame.alpha_hat.comp(0) == a0);
    CHECK(frame.alpha_hat.comp(1) == a1);

    // the chart straightens the field exactly
    const VectorField<Rational> straight = pushforward(frame.alpha_hat, fold_model(n));
    CHECK(straight.comp(0) == Jet<Rational>::constant(2, n - 1, q(1)));
    CHECK(straight.comp(1).is_zero());
}

TEST_CASE("flow box rejects an equilibrium") {
    const int n = 4;
    const VectorField<Rational> x{{Jet<Rational>::variable(2, n, 0),
                                   Jet<Rational>::variable(2, n, 1)}};
    CHECK_THROWS_AS(flow_box_frame(x), precondition_error);
}

TEST_CASE("flow box axis overrides are validated") {
    const int n = 4;
    const auto x = fold_model(n);
    CHECK_THROWS_AS(flow_box_frame(x, 5), input_error);
    CHECK_THROWS_AS(flow_box_frame(x, 0), precondition_error);  // X_1(0) = 0
    CHECK(flow_box_frame(x, 1).axis == 1);
}

TEST_CASE("straightened fold surface") {
    const int n = 6;
    const auto frame = flow_box_frame(fold_model(n));
    const auto st = straighten_surface(frame.alpha_hat, Jet<Rational>::variable(2, n, 0));
    CHECK(st.pivot == 1);
    Jet<Rational> want(1, n);
    want.add_term({2}, q(-1, 2));
    CHECK(st.Phi == want);
}

TEST_CASE("shear removes linear terms of the graph") {
    const int n = 5;
    Jet<Rational> phi(2, n);  // Phi(y1, y2) = y1^2 + 3 y2 in a 3-d chart
    phi.add_term({2, 0}, q(1));
    phi.add_term({0, 1}, q(3));
    const JetMap<Rational> ac = shear(phi);
    CHECK(ac.comp(0) == Jet<Rational>::variable(3, n, 0));
    CHECK(ac.comp(1) == Jet<Rational>::variable(3, n, 1));
    CHECK(ac.comp(2) == Jet<Rational>::variable(3, n, 2) -
                            Jet<Rational>::variable(3, n, 1).scaled(q(3)));
    Jet<Rational> reduced(2, n);
    reduced.add_term({2, 0}, q(1));
    CHECK(shifted_graph(phi) == reduced);
}

TEST_CASE("beta for a planar fold") {
    const int n = 6;
    const std::vector<Jet<Rational>> a{Jet<Rational>(1, n)};
    const Jet<Rational> b = Jet<Rational>::variable(1, n, 0);
    const auto res = build_beta(a, b, 1, 2);
    CHECK(res.beta.comp(0) == Jet<Rational>::variable(2, n, 0));
    CHECK(res.beta.comp(1) == Jet<Rational>::variable(2, n, 1).scaled(q(-1)));
    CHECK(res.det_dbeta == q(-1));
    CHECK(res.b_partial_last == q(1));
    CHECK(res.det_a == q(1));
}

TEST_CASE("beta for a fold with a parameter direction") {
    const int n = 6;
    const std::vector<Jet<Rational>> a{Jet<Rational>(2, n)};
    const Jet<Rational> b = Jet<Rational>::variable(2, n, 1);  // b = y3
    const auto res = build_beta(a, b, 1, 3);
    CHECK(res.beta.comp(0) == Jet<Rational>::variable(3, n, 0));
    CHECK(res.beta.comp(1) == Jet<Rational>::variable(3, n, 2).scaled(q(-1)));
    CHECK(res.beta.comp(2) == Jet<Rational>::variable(3, n, 1));
    // here the determinant comes out +db/dy_m(0), not -db/dy_m(0)
    CHECK(res.det_dbeta == q(1));
    CHECK(res.b_partial_last == q(1));
}

TEST_CASE("beta shifts away the a_k coefficient") {
    // k = 1, a_1 = 2 y2, b = y2: beta_1 = y1 + y2 and the prepared
    // relation composed with beta reproduces y1^2 + a_1 y1 - b.
    const int n = 6;
    std::vector<Jet<Rational>> a{Jet<Rational>::variable(1, n, 0).scaled(q(2))};
    const Jet<Rational> b = Jet<Rational>::variable(1, n, 0);
    const auto res = build_beta(a, b, 1, 2);

    const auto y1 = Jet<Rational>::variable(2, n, 0);
    const auto y2 = Jet<Rational>::variable(2, n, 1);
    CHECK(res.beta.comp(0) == y1 + y2);
    // c0 = -b - (a_1/2)^2 = -y2 - y2^2
    CHECK(res.beta.comp(1) == y2.scaled(q(-1)) - y2 * y2);

    const Jet<Rational> sigma2 = contact_surface_polynomial<Rational>(1, 2, n);
    const Jet<Rational> composed = compose(sigma2, res.beta);
    const Jet<Rational> want = y1 * y1 + y1 * y2.scaled(q(2)) - y2;
    CHECK(composed == want);
}

TEST_CASE("gamma ladder and leading component") {
    for (int k = 1; k <= 3; ++k)
        for (int m = k + 1; m <= 4; ++m) {
            const int n = 6;
            const JetMap<Rational> g = build_gamma<Rational>(k, m, n);
            for (int i = 0; i + 1 <= k; ++i)
                CHECK(g.comp(i).derivative(0) == g.comp(i + 1).truncated(n - 1));
            // (k+1)! gamma_1 is the model surface polynomial
            Rational fact = q(1);
            for (int j = 2; j <= k + 1; ++j)
                fact *= q(j);
            CHECK(g.comp(0).scaled(fact) == contact_surface_polynomial<Rational>(k, m, n));
            // bottom components are untouched coordinates
            for (int i = k + 1; i < m; ++i)
                CHECK(g.comp(i) == Jet<Rational>::variable(m, n, i));
        }
}

TEST_CASE("gamma for the planar fold") {
    const int n = 5;
    const auto g = build_gamma<Rational>(1, 2, n);
    Jet<Rational> g0(2, n);
    g0.add_term({2, 0}, q(1, 2));
    g0.add_term({0, 1}, q(1, 2));
    CHECK(g.comp(0) == g0);
    CHECK(g.comp(1) == Jet<Rational>::variable(2, n, 0));
}

TEST_CASE("gamma for the cusp") {
    const int n = 6;
    const auto g = build_gamma<Rational>(2, 3, n);
    Jet<Rational> g0(3, n);
    g0.add_term({3, 0, 0}, q(1, 6));
    g0.add_term({1, 1, 0}, q(1, 6));
    g0.add_term({0, 0, 1}, q(1, 6));
    CHECK(g.comp(0) == g0);
    Jet<Rational> g1(3, n);
    g1.add_term({2, 0, 0}, q(1, 2));
    g1.add_term({0, 1, 0}, q(1, 6));
    CHECK(g.comp(1) == g1);
    CHECK(g.comp(2) == Jet<Rational>::variable(3, n, 0));
}

TEST_CASE("model pairs normalize through the identity chart") {
    const int n = 6;
    const int cases[5][2] = {{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}};
    for (const auto& km : cases) {
        const int k = km[0], m = km[1];
        CAPTURE(k);
        CAPTURE(m);
        const VectorField<Rational> x = model_contact_field<Rational>(k, m, n);
        const Jet<Rational> h = Jet<Rational>::variable(m, n, 0);
        const auto nf = vishik_normal_form(x, h, n);
        CHECK(nf.k == k);
        const JetMap<Rational> id = JetMap<Rational>::identity(m, n);
        for (int i = 0; i < m; ++i)
            CHECK(nf.psi.comp(i) == id.comp(i));
        CHECK(residuals_vanish(nf));
    }
}

TEST_CASE("conjugated cusp normalizes exactly") {
    const int n = 6;
    const int m = 3;
    // unimodular cubic conjugator
    const auto x1 = Jet<Rational>::variable(m, n + 1, 0);
    const auto x2 = Jet<Rational>::variable(m, n + 1, 1);
    const auto x3 = Jet<Rational>::variable(m, n + 1, 2);
    const JetMap<Rational> g7{{x1 + x2 * x3, x2 - x1 * x1, x3 + x1 * x2}};
    const Pair p = conjugate_model(g7, 2, m, n);

    const auto nf = vishik_normal_form(p.field, p.surface, n);
    CHECK(nf.k == 2);
    CHECK(residuals_vanish(nf));

    // independent re-check plus chart round trip
    const auto rep = verify(nf, p.field, p.surface);
    CHECK(rep.field_zero);
    CHECK(rep.surface_zero);
    for (double v : rep.roundtrip_max_by_degree)
        CHECK(v == 0.0);

    // preparation data identities at the base point
    const auto& tr = nf.trace;
    CHECK(preparation_identity_residual(tr.a, tr.b, tr.phi_sigma, nf.k).is_zero());
    CHECK(scalar_traits<Rational>::is_zero(tr.b.constant_term()));
    for (const auto& ai : tr.a)
        CHECK(scalar_traits<Rational>::is_zero(ai.constant_term()));
    CHECK_FALSE(scalar_traits<Rational>::is_zero(tr.b_partial_last));
}

TEST_CASE("deep conjugated case in dimension four") {
    const int n = 6;
    const int m = 4;
    const auto x1 = Jet<Rational>::variable(m, n + 1, 0);
    const auto x2 = Jet<Rational>::variable(m, n + 1, 1);
    const auto x3 = Jet<Rational>::variable(m, n + 1, 2);
    const auto x4 = Jet<Rational>::variable(m, n + 1, 3);
    const JetMap<Rational> g7{{x1 + x3 * x4, x2 + x1 * x1 * x1, x3 - x2 * x4, x4 + x1 * x2}};
    const Pair p = conjugate_model(g7, 3, m, n);
    const auto nf = vishik_normal_form(p.field, p.surface, n);
    CHECK(nf.k == 3);
    CHECK(residuals_vanish(nf));
}

TEST_CASE("transversal input is refused") {
    const int n = 5;
    const VectorField<Rational> x{{Jet<Rational>::constant(2, n, q(1)), Jet<Rational>(2, n)}};
    CHECK_THROWS_WITH_AS(vishik_normal_form(x, Jet<Rational>::variable(2, n, 0), n),
                         doctest::Contains("not a contact"), precondition_error);
}

TEST_CASE("non-simple contact is refused") {
    const int n = 6;
    const auto x2 = Jet<Rational>::variable(3, n, 1);
    const VectorField<Rational> x{{x2 * x2, Jet<Rational>::constant(3, n, q(1)),
                                   Jet<Rational>(3, n)}};
    CHECK_THROWS_WITH_AS(vishik_normal_form(x, Jet<Rational>::variable(3, n, 0), n),
                         doctest::Contains("not simple"), precondition_error);
}

TEST_CASE("order budget for the fold") {
    const VectorField<Rational> x = model_contact_field<Rational>(1, 2, 2);
    const auto h = Jet<Rational>::variable(2, 2, 0);
    CHECK_THROWS_WITH_AS(vishik_normal_form(x, h, 2), doctest::Contains("order budget"),
                         precondition_error);
}

TEST_CASE("transversal axis can be chosen when several work") {
    const int n = 6;
    const int m = 3;
    const auto x1 = Jet<Rational>::variable(m, n + 1, 0);
    const auto x2 = Jet<Rational>::variable(m, n + 1, 1);
    const auto x3 = Jet<Rational>::variable(m, n + 1, 2);
    // linear part fixes x1, adds x2 into x3: field at 0 becomes (0,1,1)
    const JetMap<Rational> g7{{x1, x2, x3 + x2}};
    const Pair p = conjugate_model(g7, 1, m, n);

    const auto nf_default = vishik_normal_form(p.field, p.surface, n);
    CHECK(nf_default.trace.axis == 1);
    CHECK(residuals_vanish(nf_default));

    NormalFormOptions opts;
    opts.transversal_axis = 2;
    const auto nf_axis2 = vishik_normal_form(p.field, p.surface, n, opts);
    CHECK(nf_axis2.trace.axis == 2);
    CHECK(residuals_vanish(nf_axis2));
}

TEST_CASE("implicit pivot can be chosen when several work") {
    const int n = 6;
    const int m = 3;
    const VectorField<Rational> x = model_contact_field<Rational>(1, m, n);
    const Jet<Rational> h =
        Jet<Rational>::variable(m, n, 0) + Jet<Rational>::variable(m, n, 2);

    const auto nf_default = vishik_normal_form(x, h, n);
    CHECK(residuals_vanish(nf_default));

    NormalFormOptions opts;
    opts.implicit_pivot = 2;
    const auto nf_pivot2 = vishik_normal_form(x, h, n, opts);
    CHECK(residuals_vanish(nf_pivot2));
}

TEST_CASE("column relabeling can be overridden when the block stays regular") {
    const int n = 6;
    const int m = 4;
    const VectorField<Rational> x = model_contact_field<Rational>(2, m, n);
    // h = x1 + x3 x4 makes both middle columns of the mixed block usable
    const Jet<Rational> h =
        Jet<Rational>::variable(m, n, 0) +
        Jet<Rational>::variable(m, n, 2) * Jet<Rational>::variable(m, n, 3);

    const auto nf_default = vishik_normal_form(x, h, n);
    CHECK(nf_default.k == 2);
    CHECK(nf_default.trace.sigma == std::vector<int>{0, 1, 2, 3});
    CHECK(residuals_vanish(nf_default));

    NormalFormOptions opts;
    opts.column_permutation = std::vector<int>{0, 2, 1, 3};
    const auto nf_swapped = vishik_normal_form(x, h, n, opts);
    CHECK(nf_swapped.trace.sigma == std::vector<int>{0, 2, 1, 3});
    CHECK(residuals_vanish(nf_swapped));
}

TEST_CASE("invalid column relabelings are rejected") {
    const int n = 6;
    const int m = 4;
    const VectorField<Rational> x = model_contact_field<Rational>(2, m, n);
    const Jet<Rational> h = Jet<Rational>::variable(m, n, 0);

    NormalFormOptions bad_ends;
    bad_ends.column_permutation = std::vector<int>{1, 0, 2, 3};
    CHECK_THROWS_AS(vishik_normal_form(x, h, n, bad_ends), input_error);

    NormalFormOptions not_perm;
    not_perm.column_permutation = std::vector<int>{0, 1, 1, 3};
    CHECK_THROWS_AS(vishik_normal_form(x, h, n, not_perm), input_error);

    // legal permutation, but it moves the singular column into the block:
    // for h = x1 the graph has no mixed t y_2 term, so keeping the
    // natural column order leaves a zero row
    NormalFormOptions singular;
    singular.column_permutation = std::vector<int>{0, 1, 2, 3};
    CHECK_THROWS_WITH_AS(vishik_normal_form(x, h, n, singular),
                         doctest::Contains("singular"), precondition_error);
}

TEST_CASE("scaling the surface equation by a unit changes nothing essential") {
    const int n = 6;
    const int m = 3;
    const VectorField<Rational> x = model_contact_field<Rational>(1, m, n);
    const auto h = Jet<Rational>::variable(m, n, 0);
    const Jet<Rational> unit = Jet<Rational>::constant(m, n, q(1)) +
                               Jet<Rational>::variable(m, n, 0) +
                               Jet<Rational>::variable(m, n, 2);
    const Jet<Rational> h2 = unit * h;

    CHECK(contact_order(x, h2, m - 1).k == 1);
    const auto nf = vishik_normal_form(x, h2, n);
    CHECK(nf.k == 1);
    CHECK(residuals_vanish(nf));
}

TEST_CASE("identical runs produce identical charts") {
    const int n = 6;
    const int m = 3;
    const auto x1 = Jet<Rational>::variable(m, n + 1, 0);
    const auto x2 = Jet<Rational>::variable(m, n + 1, 1);
    const auto x3 = Jet<Rational>::variable(m, n + 1, 2);
    const JetMap<Rational> g7{{x1 + x2 * x2, x2 + x1 * x3, x3 - x1 * x1}};
    const Pair p = conjugate_model(g7, 2, m, n);
    const auto nf1 = vishik_normal_form(p.field, p.surface, n);
    const auto nf2 = vishik_normal_form(p.field, p.surface, n);
    for (int i = 0; i < m; ++i)
        CHECK(nf1.psi.comp(i) == nf2.psi.comp(i));
}

TEST_CASE("float mode fold stays within tolerance") {
    const int n = 6;
    const VectorField<double> x = model_contact_field<double>(1, 2, n);
    const auto h = Jet<double>::variable(2, n, 0);
    const auto nf = vishik_normal_form(x, h, n);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
        for (double v : nf.residual_field.comp(i).max_abs_by_degree())
            worst = std::max(worst, v);
    for (double v : nf.residual_surface.max_abs_by_degree())
        worst = std::max(worst, v);
    CHECK(worst < 1e-10);
}

TEST_CASE("float mode conjugated fold stays within tolerance") {
    const int n = 6;
    const int m = 2;
    const auto x1 = Jet<double>::variable(m, n + 1, 0);
    const auto x2 = Jet<double>::variable(m, n + 1, 1);
    const JetMap<double> g7{{x1 + x2 * x2, x2 - x1 * x1}};
    const VectorField<double> x0 = model_contact_field<double>(1, m, n + 1);
    const VectorField<double> xc = pushforward(g7, x0);
    const Jet<double> hc = invert(g7.truncated(n)).comp(0);
    const auto nf = vishik_normal_form(xc, hc, n);
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
        for (double v : nf.residual_field.comp(i).max_abs_by_degree())
            worst = std::max(worst, v);
    for (double v : nf.residual_surface.max_abs_by_degree())
        worst = std::max(worst, v);
    CHECK(worst < 1e-8);
}
