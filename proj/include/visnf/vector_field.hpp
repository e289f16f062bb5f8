#pragma once

#include <algorithm>
#include <vector>

#include "visnf/jet_map.hpp"

namespace visnf {

// A vector field jet is a square tuple of jets: component i is dx_i/dt.
// It need not vanish at the origin.
template <class S>
using VectorField = JetMap<S>;

template <class S>
void require_field(const VectorField<S>& x) {
    if (x.ncomps() != x.nvars())
        throw input_error("vector field needs one component per variable");
}

// Directional derivative X(h) = sum_i dh/dx_i * X_i.  One order is lost
// to the differentiation, and the field's own order caps the result.
template <class S>
Jet<S> lie_derivative(const Jet<S>& h, const VectorField<S>& x) {
    require_field(x);
    if (h.nvars() != x.nvars())
        throw input_error("function and field live in different variable counts");
    if (h.order() < 1)
        throw input_error("cannot differentiate an order-0 jet: no term is certified");
    const int r = std::min(h.order() - 1, x.order());
    Jet<S> out(h.nvars(), r);
    for (int i = 0; i < h.nvars(); ++i)
        out += h.derivative(i).truncated(r) * x.comp(i).truncated(r);
    return out;
}

// Time-t flow map of the field as a jet in (t, x_1, ..., x_m): component i
// is the Lie series sum_j t^j (X^j x_i) / j!, truncated at total degree N.
// Variable 0 of the result is t.
template <class S>
JetMap<S> flow(const VectorField<S>& x) {
    require_field(x);
    const int m = x.nvars();
    const int n = x.order();

    std::vector<int> shift(m);
    for (int i = 0; i < m; ++i)
        shift[i] = i + 1;

    std::vector<Jet<S>> comps;
    comps.reserve(m);
    for (int i = 0; i < m; ++i) {
        Jet<S> comp(m + 1, n);
        Jet<S> cur = Jet<S>::variable(m, n, i);
        S fact = scalar_traits<S>::one();
        for (int j = 0; j <= n; ++j) {
            if (j > 0)
                fact = fact * scalar_traits<S>::from_int(j);
            Jet<S> lifted = cur.truncated(std::max(n - j, 0)).embedded(m + 1, shift);
            Exponent tj(m + 1, 0);
            tj[0] = j;
            comp += Jet<S>::monomial(m + 1, n, tj, scalar_traits<S>::one() / fact)
                        .assume_polynomial(n) *
                    lifted.assume_polynomial(n);
            if (j == n || cur.order() == 0)
                break;
            cur = lie_derivative(cur, x);
        }
        comps.push_back(std::move(comp));
    }
    return JetMap<S>(std::move(comps));
}

// Conjugated field (DF . X) o F^{-1}: how X looks in the target
// coordinates of the change of variables F.  The Jacobian costs one
// order, so the result is certified to min(order(F) - 1, order(X)).
template <class S>
VectorField<S> pushforward(const JetMap<S>& f, const VectorField<S>& x) {
    require_field(x);
    if (f.ncomps() != f.nvars())
        throw input_error("change of variables must be a square map");
    if (f.nvars() != x.nvars())
        throw input_error("change of variables and field live in different variable counts");
    if (f.order() < 1)
        throw input_error("change of variables needs at least order 1");
    if (!f.origin_preserving())
        throw input_error("change of variables must fix the origin");

    const int r = std::min(f.order() - 1, x.order());
    const JetMap<S> finv = invert(f).truncated(r);
    std::vector<Jet<S>> comps;
    comps.reserve(f.ncomps());
    for (int i = 0; i < f.ncomps(); ++i) {
        Jet<S> yi(f.nvars(), r);
        for (int j = 0; j < f.nvars(); ++j)
            yi += f.comp(i).derivative(j).truncated(r) * x.comp(j).truncated(r);
        comps.push_back(compose(yi, finv));
    }
    return VectorField<S>(std::move(comps));
}

}  // namespace visnf
