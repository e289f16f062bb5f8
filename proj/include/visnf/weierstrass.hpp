#pragma once

#include <map>
#include <vector>

#include "visnf/jet.hpp"

namespace visnf {

// Result of dividing g(t, x) by a distinguished series d(t, u, x):
// g = q * d + sum_i t^i r_i with q in (t, u, x) and r_i in (u, x).
// The quotient is capped at total degree N - s; with that cap the
// decomposition is the unique one among jets, and it agrees with the
// germ-level division data on every certified term.  Remainder r_i
// keeps order N - i: terms beyond that would multiply t^i past the
// truncation order and are not determined by the inputs.
template <class S>
struct DivisionResult {
    Jet<S> quotient;                 // in (t, u, x), order N - s
    std::vector<Jet<S>> remainders;  // r_i in (u, x), order N - i
};

namespace detail {

// All exponent vectors of length nvars with total degree <= maxdeg,
// in graded lexicographic order.
inline std::vector<Exponent> exponents_up_to(int nvars, int maxdeg) {
    std::vector<Exponent> out;
    Exponent cur(nvars, 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == nvars) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[pos] = v;
            self(self, pos + 1, left - v);
            cur[pos] = 0;
        }
    };
    rec(rec, 0, maxdeg);
    std::sort(out.begin(), out.end(), GradedLexLess{});
    return out;
}

// Reciprocal of a unit power series, coefficientwise to the same length.
template <class S>
std::vector<S> series_reciprocal(const std::vector<S>& u) {
    std::vector<S> v(u.size(), scalar_traits<S>::zero());
    v[0] = scalar_traits<S>::one() / u[0];
    for (std::size_t i = 1; i < u.size(); ++i) {
        S acc = scalar_traits<S>::zero();
        for (std::size_t j = 1; j <= i; ++j)
            acc += u[j] * v[i - j];
        v[i] = -acc / u[0];
    }
    return v;
}

}  // namespace detail

// g lives in (t, x_1..x_n); d lives in (t, u, x_1..x_n).  Internally g
// is embedded into the divisor's variable set (it has no u dependence).
template <class S>
DivisionResult<S> weierstrass_divide(const Jet<S>& g_in, const Jet<S>& d, int s) {
    if (d.nvars() != g_in.nvars() + 1)
        throw input_error(
            "divisor must have exactly one extra variable (u) after the distinguished one");
    if (g_in.order() != d.order())
        throw input_error("order mismatch: jets must share a truncation order");

    std::vector<int> emb(g_in.nvars());
    emb[0] = 0;
    for (int i = 1; i < g_in.nvars(); ++i)
        emb[i] = i + 1;
    const Jet<S> g = g_in.embedded(d.nvars(), emb);

    const int n = g.order();
    const int np = g.nvars() - 1;
    if (s < 1 || s > n)
        throw input_error("regularity order s must satisfy 1 <= s <= jet order");

    // t-regularity of order s: on the t-axis the divisor starts with a
    // nonzero t^s term.
    for (int j = 0; j < s; ++j) {
        Exponent e(g.nvars(), 0);
        e[0] = j;
        if (!d.negligible(d.coeff(e)))
            throw precondition_error("divisor is not t-regular of the declared order");
    }
    std::vector<S> u(n - s + 1, scalar_traits<S>::zero());
    for (int j = s; j <= n; ++j) {
        Exponent e(g.nvars(), 0);
        e[0] = j;
        u[j - s] = d.coeff(e);
    }
    if (d.negligible(u[0]))
        throw precondition_error("divisor is not t-regular of the declared order");
    const std::vector<S> v = detail::series_reciprocal(u);

    // Slice both jets into t-coefficient vectors per parameter monomial.
    using Slices = std::map<Exponent, std::vector<S>, GradedLexLess>;
    auto slice = [&](const Jet<S>& j, bool strip_regular_head) {
        Slices m;
        for (const auto& [e, c] : j.terms()) {
            Exponent mu(e.begin() + 1, e.end());
            const bool pure_t = total_degree(mu) == 0;
            if (strip_regular_head && pure_t)
                continue;
            auto [it, inserted] = m.emplace(mu, std::vector<S>());
            if (inserted)
                it->second.assign(n + 1, scalar_traits<S>::zero());
            it->second[e[0]] = c;
        }
        return m;
    };
    const Slices gm = slice(g, false);
    const Slices dm = slice(d, true);

    Jet<S> q(g.nvars(), n - s >= 0 ? n - s : 0);
    std::vector<Jet<S>> r;
    r.reserve(s);
    for (int i = 0; i < s; ++i)
        r.emplace_back(np, n - i);

    Slices qm;
    for (const Exponent& mu : detail::exponents_up_to(np, n)) {
        const int t_cap = n - total_degree(mu);

        std::vector<S> acc(t_cap + 1, scalar_traits<S>::zero());
        if (auto it = gm.find(mu); it != gm.end())
            for (int a = 0; a <= t_cap; ++a)
                acc[a] = it->second[a];
        for (const auto& [kappa, dvec] : dm) {
            Exponent nu(np);
            bool fits = true;
            for (int i = 0; i < np; ++i) {
                nu[i] = mu[i] - kappa[i];
                fits = fits && nu[i] >= 0;
            }
            if (!fits)
                continue;
            auto it = qm.find(nu);
            if (it == qm.end())
                continue;
            const std::vector<S>& qvec = it->second;
            for (int a = 0; a < static_cast<int>(qvec.size()); ++a) {
                if (scalar_traits<S>::is_zero(qvec[a]))
                    continue;
                for (int b = 0; a + b <= t_cap && b <= n; ++b)
                    acc[a + b] -= qvec[a] * dvec[b];
            }
        }

        for (int i = 0; i < s && i <= t_cap; ++i)
            r[i].add_term(mu, acc[i]);

        if (t_cap >= s) {
            std::vector<S> qvec(t_cap - s + 1, scalar_traits<S>::zero());
            for (int a = 0; a <= t_cap - s; ++a) {
                S val = scalar_traits<S>::zero();
                for (int j = 0; j <= a; ++j)
                    val += acc[s + j] * v[a - j];
                qvec[a] = val;
                Exponent e(g.nvars(), 0);
                e[0] = a;
                for (int i = 0; i < np; ++i)
                    e[i + 1] = mu[i];
                q.add_term(e, val);
            }
            qm.emplace(mu, std::move(qvec));
        }
    }

    return DivisionResult<S>{std::move(q), std::move(r)};
}

// Preparation data of a t-regular function: writes t^s as
// q(t,u,x) (phi(t,x) - u) + b(u,x) - sum_{i=1}^{s-1} t^i a_i(u,x),
// so that t^s + sum_i t^i a_i(phi, x) = b(phi, x) holds through the
// truncation order after the back substitution u = phi.  Input variables
// are (t, x_1..x_n); output variables are (u, x_1..x_n).
template <class S>
struct PreparationResult {
    std::vector<Jet<S>> a;  // a_1..a_{s-1}, a[i] has order N - (i+1)
    Jet<S> b;               // order N
};

template <class S>
PreparationResult<S> prepare(const Jet<S>& phi, int s) {
    const int n = phi.order();
    const int nx = phi.nvars() - 1;
    if (phi.nvars() < 1)
        throw input_error("preparation input needs at least the distinguished variable");
    if (s < 1 || s > n)
        throw input_error("regularity order s must satisfy 1 <= s <= jet order");
    if (!phi.negligible(phi.constant_term()))
        throw input_error("preparation requires a function vanishing at the origin");
    for (int j = 0; j < s; ++j) {
        Exponent e(phi.nvars(), 0);
        e[0] = j;
        if (!phi.negligible(phi.coeff(e)))
            throw precondition_error(
                "declared order does not match the vanishing pattern on the t-axis");
    }
    {
        Exponent e(phi.nvars(), 0);
        e[0] = s;
        if (phi.negligible(phi.coeff(e)))
            throw precondition_error(
                "declared order does not match the vanishing pattern on the t-axis");
    }

    // d(t, u, x) = phi(t, x) - u in variables (t, u, x_1..x_n).
    std::vector<int> emb(phi.nvars());
    emb[0] = 0;
    for (int i = 1; i < phi.nvars(); ++i)
        emb[i] = i + 1;
    Jet<S> d = phi.embedded(2 + nx, emb);
    d.add_term([&] {
        Exponent e(2 + nx, 0);
        e[1] = 1;
        return e;
    }(), -scalar_traits<S>::one());

    Exponent ts(phi.nvars(), 0);
    ts[0] = s;
    const Jet<S> g = Jet<S>::monomial(phi.nvars(), n, ts, scalar_traits<S>::one());

    DivisionResult<S> div = weierstrass_divide(g, d, s);

    PreparationResult<S> out{{}, std::move(div.remainders[0])};
    out.a.reserve(s - 1);
    for (int i = 1; i < s; ++i)
        out.a.push_back(-div.remainders[i]);

    if (!out.b.negligible(out.b.constant_term()))
        throw internal_error("preparation data does not vanish at the origin");
    for (const auto& ai : out.a)
        if (!ai.negligible(ai.constant_term()))
            throw internal_error("preparation data does not vanish at the origin");
    if (out.b.negligible(out.b.linear_coeff(0)))
        throw internal_error("preparation data is degenerate in the substituted variable");
    return out;
}

}  // namespace visnf
