#pragma once

#include <utility>
#include <vector>

#include "visnf/jet.hpp"

namespace visnf {

// A tuple of jets over a shared variable set and truncation order,
// viewed as a polynomial map germ.  Component count is independent of
// the variable count, so these also serve as embeddings and projections.
template <class S>
class JetMap {
public:
    explicit JetMap(std::vector<Jet<S>> comps) : comps_(std::move(comps)) {
        if (comps_.empty())
            throw input_error("map needs at least one component");
        for (const auto& c : comps_)
            if (c.nvars() != comps_[0].nvars() || c.order() != comps_[0].order())
                throw input_error("map components must share variables and order");
    }

    static JetMap identity(int nvars, int order) {
        std::vector<Jet<S>> comps;
        comps.reserve(nvars);
        for (int i = 0; i < nvars; ++i)
            comps.push_back(Jet<S>::variable(nvars, order, i));
        return JetMap(std::move(comps));
    }

    // Component i is the variable perm[i]; for a bijective perm this is
    // the coordinate permutation x |-> (x_{perm[0]}, ..., x_{perm[n-1]}).
    static JetMap permutation(int nvars, int order, const std::vector<int>& perm) {
        std::vector<Jet<S>> comps;
        comps.reserve(perm.size());
        for (int target : perm)
            comps.push_back(Jet<S>::variable(nvars, order, target));
        return JetMap(std::move(comps));
    }

    static JetMap linear(int nvars, int order, const std::vector<std::vector<S>>& matrix) {
        std::vector<Jet<S>> comps;
        comps.reserve(matrix.size());
        for (const auto& row : matrix) {
            if (static_cast<int>(row.size()) != nvars)
                throw input_error("matrix row length does not match variable count");
            Jet<S> c(nvars, order);
            for (int j = 0; j < nvars; ++j)
                c += Jet<S>::variable(nvars, order, j).scaled(row[j]);
            comps.push_back(std::move(c));
        }
        return JetMap(std::move(comps));
    }

    int nvars() const { return comps_[0].nvars(); }
    int order() const { return comps_[0].order(); }
    int ncomps() const { return static_cast<int>(comps_.size()); }
    const Jet<S>& comp(int i) const { return comps_.at(i); }
    const std::vector<Jet<S>>& components() const { return comps_; }

    bool origin_preserving() const {
        for (const auto& c : comps_)
            if (!c.negligible(c.constant_term()))
                return false;
        return true;
    }

    JetMap truncated(int new_order) const {
        std::vector<Jet<S>> comps;
        comps.reserve(comps_.size());
        for (const auto& c : comps_)
            comps.push_back(c.truncated(new_order));
        return JetMap(std::move(comps));
    }

    JetMap assume_polynomial(int new_order) const {
        std::vector<Jet<S>> comps;
        comps.reserve(comps_.size());
        for (const auto& c : comps_)
            comps.push_back(c.assume_polynomial(new_order));
        return JetMap(std::move(comps));
    }

    std::vector<std::vector<S>> linear_matrix() const {
        std::vector<std::vector<S>> m(ncomps(), std::vector<S>(nvars(), scalar_traits<S>::zero()));
        for (int i = 0; i < ncomps(); ++i)
            for (int j = 0; j < nvars(); ++j)
                m[i][j] = comps_[i].linear_coeff(j);
        return m;
    }

    friend bool operator==(const JetMap& a, const JetMap& b) { return a.comps_ == b.comps_; }
    friend bool operator!=(const JetMap& a, const JetMap& b) { return !(a == b); }

private:
    std::vector<Jet<S>> comps_;
};

template <class To, class From>
JetMap<To> map_cast(const JetMap<From>& f) {
    std::vector<Jet<To>> comps;
    comps.reserve(f.ncomps());
    for (const auto& c : f.components())
        comps.push_back(jet_cast<To>(c));
    return JetMap<To>(std::move(comps));
}

namespace detail {

// Strips constant terms that pass the negligibility test; exact mode
// never has any to strip because origin_preserving() was checked first.
template <class S>
Jet<S> drop_tiny_constant(const Jet<S>& j) {
    const S c0 = j.constant_term();
    if (scalar_traits<S>::is_zero(c0))
        return j;
    Jet<S> out = j;
    out.add_term(Exponent(j.nvars(), 0), -c0);
    return out;
}

}  // namespace detail

// f after the substitution x_i = g_i.  The inner map must fix the origin;
// otherwise the result would depend on uncertified tail terms of f.
template <class S>
Jet<S> compose(const Jet<S>& f, const JetMap<S>& g) {
    if (g.ncomps() != f.nvars())
        throw input_error("component count of inner map does not match outer variable count");
    if (g.order() != f.order())
        throw input_error("order mismatch: jets must share a truncation order");
    if (!g.origin_preserving())
        throw input_error("composition requires an origin-preserving inner map");

    const int n = g.nvars();
    const int N = f.order();
    std::vector<Jet<S>> inner;
    inner.reserve(g.ncomps());
    for (const auto& c : g.components())
        inner.push_back(detail::drop_tiny_constant(c));

    // pw[i][k] holds inner[i]^k, built on demand.
    std::vector<std::vector<Jet<S>>> pw(inner.size());
    auto power = [&](int i, int k) -> const Jet<S>& {
        auto& cache = pw[i];
        if (cache.empty())
            cache.push_back(Jet<S>::constant(n, N, scalar_traits<S>::one()));
        while (static_cast<int>(cache.size()) <= k)
            cache.push_back(cache.back() * inner[i]);
        return cache[k];
    };

    Jet<S> out(n, N);
    for (const auto& [e, c] : f.terms()) {
        Jet<S> term = Jet<S>::constant(n, N, c);
        for (int i = 0; i < f.nvars() && !term.is_zero(); ++i)
            if (e[i] > 0)
                term = term * power(i, e[i]);
        out += term;
    }
    return out;
}

template <class S>
JetMap<S> compose(const JetMap<S>& f, const JetMap<S>& g) {
    std::vector<Jet<S>> comps;
    comps.reserve(f.ncomps());
    for (const auto& c : f.components())
        comps.push_back(compose(c, g));
    return JetMap<S>(std::move(comps));
}

namespace detail {

// Dense inverse of a square scalar matrix by Gauss-Jordan elimination.
// Exact pivots take the first nonzero entry; double pivots the largest.
template <class S>
std::vector<std::vector<S>> invert_matrix(std::vector<std::vector<S>> a) {
    const int n = static_cast<int>(a.size());
    double scale = 1.0;
    if constexpr (!is_exact_v<S>) {
        for (const auto& row : a)
            for (const S& v : row)
                scale = std::max(scale, std::abs(v));
    }
    auto negligible = [&](const S& v) {
        if constexpr (is_exact_v<S>)
            return scalar_traits<S>::is_zero(v);
        else
            return std::abs(v) <= float_zero_threshold * scale;
    };

    std::vector<std::vector<S>> inv(n, std::vector<S>(n, scalar_traits<S>::zero()));
    for (int i = 0; i < n; ++i)
        inv[i][i] = scalar_traits<S>::one();

    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        if constexpr (is_exact_v<S>) {
            for (int r = col; r < n; ++r)
                if (!scalar_traits<S>::is_zero(a[r][col])) {
                    pivot = r;
                    break;
                }
        } else {
            double best = 0.0;
            for (int r = col; r < n; ++r)
                if (std::abs(a[r][col]) > best) {
                    best = std::abs(a[r][col]);
                    pivot = r;
                }
            if (pivot >= 0 && negligible(a[pivot][col]))
                pivot = -1;
        }
        if (pivot < 0)
            throw precondition_error("matrix is singular");
        std::swap(a[col], a[pivot]);
        std::swap(inv[col], inv[pivot]);
        const S d = a[col][col];
        for (int j = 0; j < n; ++j) {
            a[col][j] /= d;
            inv[col][j] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col)
                continue;
            const S f = a[r][col];
            if (scalar_traits<S>::is_zero(f))
                continue;
            for (int j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

}  // namespace detail

// Inverse map germ through the shared truncation order, by fixing one
// homogeneous degree per Newton-style sweep.  Requires a square,
// origin-preserving map with invertible linear part.
template <class S>
JetMap<S> invert(const JetMap<S>& f) {
    const int m = f.nvars();
    const int N = f.order();
    if (f.ncomps() != m)
        throw input_error("only square maps can be inverted");
    if (!f.origin_preserving())
        throw input_error("inversion requires an origin-preserving map");

    std::vector<std::vector<S>> linv;
    try {
        linv = detail::invert_matrix(f.linear_matrix());
    } catch (const precondition_error&) {
        throw precondition_error("map is not invertible at the origin: linear part is singular");
    }

    JetMap<S> g = JetMap<S>::linear(m, N, linv);
    const JetMap<S> id = JetMap<S>::identity(m, N);
    for (int d = 1; d < N; ++d) {
        std::vector<Jet<S>> err;
        err.reserve(m);
        bool all_zero = true;
        for (int i = 0; i < m; ++i) {
            Jet<S> e = compose(f.comp(i), g) - id.comp(i);
            all_zero = all_zero && e.is_zero();
            err.push_back(e.homogeneous_part(d + 1));
        }
        if (all_zero)
            break;
        std::vector<Jet<S>> comps = g.components();
        for (int i = 0; i < m; ++i) {
            Jet<S> delta(m, N);
            for (int j = 0; j < m; ++j)
                delta += err[j].scaled(linv[i][j]);
            comps[i] -= delta;
        }
        g = JetMap<S>(std::move(comps));
    }
    return g;
}

// Solves f = 0 for the variable var_index near the origin, returning the
// graph jet in the remaining variables (original order preserved).
// Requires f(0) = 0 and a nonvanishing partial in the solved variable.
template <class S>
Jet<S> solve_implicit(const Jet<S>& f, int var_index) {
    const int m = f.nvars();
    const int N = f.order();
    if (m < 2)
        throw input_error("implicit solve needs at least two variables");
    if (var_index < 0 || var_index >= m)
        throw input_error("variable index out of range");
    if (!f.negligible(f.constant_term()))
        throw input_error("implicit solve requires the base point to lie on the zero set");
    const S c = f.linear_coeff(var_index);
    if (f.negligible(c))
        throw precondition_error("partial derivative in the solved variable vanishes at the origin");

    auto graph = [&](const Jet<S>& phi) {
        std::vector<Jet<S>> comps;
        comps.reserve(m);
        int reduced = 0;
        for (int w = 0; w < m; ++w) {
            if (w == var_index)
                comps.push_back(phi);
            else
                comps.push_back(Jet<S>::variable(m - 1, N, reduced++));
        }
        return JetMap<S>(std::move(comps));
    };

    Jet<S> phi(m - 1, N);
    const Jet<S> f0 = detail::drop_tiny_constant(f);
    for (int d = 1; d <= N; ++d) {
        Jet<S> r = compose(f0, graph(phi));
        if (r.is_zero())
            break;
        phi -= r.homogeneous_part(d).scaled(scalar_traits<S>::one() / c);
    }
    return phi;
}

// Embedding of the graph of phi: a map from the (m-1) free variables
// into m-space whose var_index-th component is phi and whose remaining
// components are the free variables in their original order.
template <class S>
JetMap<S> graph_map(const Jet<S>& phi, int var_index) {
    const int m = phi.nvars() + 1;
    if (var_index < 0 || var_index >= m)
        throw input_error("variable index out of range");
    std::vector<Jet<S>> comps;
    comps.reserve(m);
    int reduced = 0;
    for (int w = 0; w < m; ++w) {
        if (w == var_index)
            comps.push_back(phi);
        else
            comps.push_back(Jet<S>::variable(m - 1, phi.order(), reduced++));
    }
    return JetMap<S>(std::move(comps));
}

// Jacobian matrix of a map, one order lower than the map itself.
template <class S>
std::vector<std::vector<Jet<S>>> jacobian(const JetMap<S>& f) {
    std::vector<std::vector<Jet<S>>> out;
    out.reserve(f.ncomps());
    for (const auto& c : f.components()) {
        std::vector<Jet<S>> row;
        row.reserve(f.nvars());
        for (int j = 0; j < f.nvars(); ++j)
            row.push_back(c.derivative(j));
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace visnf
