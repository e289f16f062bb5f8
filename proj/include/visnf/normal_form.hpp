#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "visnf/contact.hpp"
#include "visnf/vector_field.hpp"
#include "visnf/weierstrass.hpp"

namespace visnf {

namespace detail {

// Determinant by Gaussian elimination; exact mode picks the first
// nonzero pivot, double mode the largest.
template <class S>
S determinant(std::vector<std::vector<S>> m) {
    const int n = static_cast<int>(m.size());
    S det = scalar_traits<S>::one();
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        if constexpr (is_exact_v<S>) {
            for (int r = col; r < n; ++r)
                if (!scalar_traits<S>::is_zero(m[r][col])) {
                    pivot = r;
                    break;
                }
        } else {
            double best = 0.0;
            for (int r = col; r < n; ++r)
                if (std::abs(m[r][col]) > best) {
                    best = std::abs(m[r][col]);
                    pivot = r;
                }
        }
        if (pivot < 0 || scalar_traits<S>::is_zero(m[pivot][col]))
            return scalar_traits<S>::zero();
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det = det * m[col][col];
        for (int r = col + 1; r < n; ++r) {
            const S f = m[r][col] / m[col][col];
            if (scalar_traits<S>::is_zero(f))
                continue;
            for (int c = col; c < n; ++c)
                m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

template <class S>
S factorial(int n) {
    S f = scalar_traits<S>::one();
    for (int i = 2; i <= n; ++i)
        f = f * scalar_traits<S>::from_int(i);
    return f;
}

template <class S>
S binomial(int n, int j) {
    return factorial<S>(n) / (factorial<S>(j) * factorial<S>(n - j));
}

template <class S>
Jet<S> jet_power(const Jet<S>& base, int e) {
    Jet<S> out = Jet<S>::constant(base.nvars(), base.order(), scalar_traits<S>::one());
    for (int i = 0; i < e; ++i)
        out = out * base;
    return out;
}

}  // namespace detail

// Linear model field at a k-contact: (x_2, ..., x_{k+1}, 1, 0, ..., 0),
// with the trailing zeros absent when k + 1 = m.
template <class S>
VectorField<S> model_contact_field(int k, int m, int order) {
    if (k < 1 || k > m - 1)
        throw input_error("model field needs 1 <= k <= m-1");
    std::vector<Jet<S>> comps;
    comps.reserve(m);
    for (int i = 0; i < k; ++i)
        comps.push_back(Jet<S>::variable(m, order, i + 1));
    comps.push_back(Jet<S>::constant(m, order, scalar_traits<S>::one()));
    for (int i = k + 1; i < m; ++i)
        comps.push_back(Jet<S>(m, order));
    return VectorField<S>(std::move(comps));
}

// The polynomial cutting out the image of the surface between the beta
// and gamma stages: x_1^{k+1} + x_2 x_1^{k-1} + ... + x_k x_1 + x_{k+1}.
template <class S>
Jet<S> contact_surface_polynomial(int k, int m, int order) {
    Jet<S> p(m, order);
    Exponent lead(m, 0);
    lead[0] = k + 1;
    p.add_term(lead, scalar_traits<S>::one());
    for (int l = 2; l <= k + 1; ++l) {
        Exponent e(m, 0);
        e[0] = k + 1 - l;
        e[l - 1] = 1;
        p.add_term(e, scalar_traits<S>::one());
    }
    return p;
}

// Chart choices that are normally made automatically; tests override
// them to exercise chart independence.  All indices are 0-based.
struct NormalFormOptions {
    std::optional<int> transversal_axis;
    std::optional<int> implicit_pivot;                   // in 1..m-1
    std::optional<std::vector<int>> column_permutation;  // m entries, fixes 0 and m-1
};

template <class S>
struct FlowBoxFrame {
    int axis;              // transversal hyperplane is {x_axis = 0}
    JetMap<S> forward;     // (t, s) -> flow through the transversal point
    JetMap<S> alpha_hat;   // its inverse: the straightening chart
};

// Tubular flow chart of a field with X(0) != 0: coordinates in which the
// field becomes (1, 0, ..., 0), built by inverting the flow map off a
// coordinate transversal.  Output coordinate 0 is the time.
template <class S>
FlowBoxFrame<S> flow_box_frame(const VectorField<S>& x,
                               std::optional<int> axis_override = std::nullopt) {
    require_field(x);
    const int m = x.nvars();
    const int n = x.order();

    double scale = 0.0;
    for (int i = 0; i < m; ++i)
        scale = std::max(scale, std::abs(scalar_traits<S>::to_double(x.comp(i).constant_term())));
    auto usable = [&](int i) {
        const S c = x.comp(i).constant_term();
        if constexpr (is_exact_v<S>)
            return !scalar_traits<S>::is_zero(c);
        else
            return std::abs(c) > float_zero_threshold * std::max(1.0, scale);
    };

    int axis = -1;
    if (axis_override) {
        axis = *axis_override;
        if (axis < 0 || axis >= m)
            throw input_error("transversal axis out of range");
        if (!usable(axis))
            throw precondition_error("chosen transversal axis has vanishing field component");
    } else {
        double best = -1.0;
        for (int i = 0; i < m; ++i) {
            const double v = std::abs(scalar_traits<S>::to_double(x.comp(i).constant_term()));
            if (usable(i) && v > best) {
                best = v;
                axis = i;
            }
        }
        if (axis < 0)
            throw precondition_error("equilibrium at the base point: the field vanishes there");
    }

    // (t, s_1..s_{m-1}) |-> flow at time t from the transversal point
    // with x_axis = 0 and the other coordinates equal to s.
    const JetMap<S> full = flow(x);
    std::vector<Jet<S>> emb;
    emb.reserve(m + 1);
    emb.push_back(Jet<S>::variable(m, n, 0));
    for (int i = 0; i < m; ++i) {
        if (i == axis)
            emb.push_back(Jet<S>(m, n));
        else
            emb.push_back(Jet<S>::variable(m, n, 1 + (i < axis ? i : i - 1)));
    }
    JetMap<S> forward = compose(full, JetMap<S>(std::move(emb)));
    JetMap<S> alpha_hat = invert(forward);
    return FlowBoxFrame<S>{axis, std::move(forward), std::move(alpha_hat)};
}

template <class S>
JetMap<S> flow_box(const VectorField<S>& x) {
    return flow_box_frame(x).alpha_hat;
}

template <class S>
struct StraightenResult {
    Jet<S> Phi;             // graph jet in the first m-1 chart coordinates
    std::vector<int> tau;   // transposition applied before solving
    int pivot;              // chart coordinate swapped into last position
};

namespace detail {

template <class S>
StraightenResult<S> straighten_given(const Jet<S>& f_hat, std::optional<int> pivot_override) {
    const int m = f_hat.nvars();
    int pivot = -1;
    if (pivot_override) {
        pivot = *pivot_override;
        if (pivot < 1 || pivot >= m)
            throw input_error("implicit pivot out of range (must avoid the time coordinate)");
        if (f_hat.negligible(f_hat.linear_coeff(pivot)))
            throw precondition_error("chosen implicit pivot has vanishing partial derivative");
    } else {
        if constexpr (is_exact_v<S>) {
            for (int j = 1; j < m; ++j)
                if (!scalar_traits<S>::is_zero(f_hat.linear_coeff(j))) {
                    pivot = j;
                    break;
                }
        } else {
            double best = 0.0;
            for (int j = 1; j < m; ++j) {
                const double v = std::abs(scalar_traits<S>::to_double(f_hat.linear_coeff(j)));
                if (v > best) {
                    best = v;
                    pivot = j;
                }
            }
            if (pivot >= 0 && f_hat.negligible(f_hat.linear_coeff(pivot)))
                pivot = -1;
        }
        if (pivot < 0)
            throw precondition_error(
                "surface gradient vanishes along the transversal: cannot solve for a graph");
    }

    std::vector<int> tau(m);
    for (int i = 0; i < m; ++i)
        tau[i] = i;
    std::swap(tau[pivot], tau[m - 1]);

    const Jet<S> f_tau = compose(f_hat, JetMap<S>::permutation(m, f_hat.order(), tau));
    Jet<S> Phi = solve_implicit(f_tau, m - 1);
    return StraightenResult<S>{std::move(Phi), std::move(tau), pivot};
}

}  // namespace detail

// Writes the surface in flow-box coordinates as the graph of the last
// coordinate: h(alpha_hat^{-1}) = 0 becomes y_m = Phi(y_1..y_{m-1})
// after swapping a usable coordinate into the last slot.
template <class S>
StraightenResult<S> straighten_surface(const JetMap<S>& alpha_hat, const Jet<S>& h,
                                       std::optional<int> pivot_override = std::nullopt) {
    if (h.nvars() != alpha_hat.nvars())
        throw input_error("surface and chart live in different variable counts");
    return detail::straighten_given(compose(h, invert(alpha_hat)), pivot_override);
}

// Shear removing the linear dependence of the graph on the middle
// coordinates: returns the chart (y_1..y_{m-1}, y_m - sum c_i y_i) and
// leaves phi = Phi - sum c_i y_i with vanishing gradient.
template <class S>
JetMap<S> shear(const Jet<S>& Phi) {
    const int m = Phi.nvars() + 1;
    const int n = Phi.order();
    Jet<S> last = Jet<S>::variable(m, n, m - 1);
    for (int i = 1; i <= m - 2; ++i)
        last -= Jet<S>::variable(m, n, i).scaled(Phi.linear_coeff(i));
    std::vector<Jet<S>> comps;
    comps.reserve(m);
    for (int i = 0; i < m - 1; ++i)
        comps.push_back(Jet<S>::variable(m, n, i));
    comps.push_back(std::move(last));
    return JetMap<S>(std::move(comps));
}

template <class S>
Jet<S> shifted_graph(const Jet<S>& Phi) {
    Jet<S> phi = Phi;
    for (int i = 1; i <= Phi.nvars() - 1; ++i)
        phi -= Jet<S>::variable(Phi.nvars(), Phi.order(), i).scaled(Phi.linear_coeff(i));
    return phi;
}

// Mixed-derivative matrix entries d^{i+1} phi / d y_1^i d y_col (0).
template <class S>
S mixed_partial(const Jet<S>& phi, int i, int col) {
    Exponent e(phi.nvars(), 0);
    e[0] = i;
    e[col] += 1;
    S c = phi.coeff(e);
    c = c * detail::factorial<S>(i);
    if (col == 0)
        c = c * scalar_traits<S>::from_int(i + 1);
    return c;
}

// Relabels the middle coordinates y_2..y_{m-1} so that the k x k block
// (d^{i+1} phi / d y_1^i d y_j (0))_{i,j <= k} becomes invertible,
// choosing pivot columns greedily row by row.  Exact mode takes the
// first workable column, double mode the largest pivot.
template <class S>
std::vector<int> choose_column_permutation(const Jet<S>& phi, int k) {
    const int m = phi.nvars() + 1;
    if (k < 1 || k > m - 1)
        throw input_error("contact order out of range for this dimension");

    std::vector<int> sigma(m);
    for (int i = 0; i < m; ++i)
        sigma[i] = i;
    if (k == 1)
        return sigma;

    // Rows i = 1..k-1 over candidate columns y_2..y_{m-1}.
    std::vector<std::vector<S>> c(k - 1);
    for (int i = 1; i < k; ++i) {
        c[i - 1].assign(m - 2, scalar_traits<S>::zero());
        for (int col = 1; col <= m - 2; ++col)
            c[i - 1][col - 1] = mixed_partial(phi, i, col);
    }

    double scale = 1.0;
    if constexpr (!is_exact_v<S>)
        for (const auto& row : c)
            for (const S& v : row)
                scale = std::max(scale, std::abs(v));

    std::vector<int> selected;
    std::vector<bool> used(m - 2, false);
    for (int r = 0; r < k - 1; ++r) {
        int best_col = -1;
        if constexpr (is_exact_v<S>) {
            for (int col = 0; col < m - 2; ++col)
                if (!used[col] && !scalar_traits<S>::is_zero(c[r][col])) {
                    best_col = col;
                    break;
                }
        } else {
            double best = float_zero_threshold * scale;
            for (int col = 0; col < m - 2; ++col)
                if (!used[col] && std::abs(c[r][col]) > best) {
                    best = std::abs(c[r][col]);
                    best_col = col;
                }
        }
        if (best_col < 0)
            throw precondition_error(
                "mixed-derivative matrix of the graph is rank deficient: contact is not simple");
        used[best_col] = true;
        selected.push_back(best_col);
        for (int r2 = r + 1; r2 < k - 1; ++r2) {
            const S f = c[r2][best_col] / c[r][best_col];
            if (scalar_traits<S>::is_zero(f))
                continue;
            for (int col = 0; col < m - 2; ++col)
                c[r2][col] -= f * c[r][col];
        }
    }

    // Selected columns take positions 2..k; the rest keep their order.
    int pos = 1;
    for (int col : selected)
        sigma[pos++] = col + 1;
    for (int col = 0; col < m - 2; ++col)
        if (!used[col])
            sigma[pos++] = col + 1;
    return sigma;
}

// The k x k block whose invertibility the column permutation guarantees,
// evaluated after relabeling by sigma.
template <class S>
std::vector<std::vector<S>> mixed_block(const Jet<S>& phi, int k, const std::vector<int>& sigma) {
    std::vector<std::vector<S>> b(k, std::vector<S>(k, scalar_traits<S>::zero()));
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k; ++j)
            b[i - 1][j - 1] = mixed_partial(phi, i, j == 1 ? 0 : sigma[j - 1]);
    return b;
}

template <class S>
struct BetaResult {
    JetMap<S> beta;
    S det_dbeta;
    S b_partial_last;                   // db/dy_m(0)
    std::vector<std::vector<S>> a_matrix;  // (da_i/dy_j(0)), i<k, j in 2..k
    S det_a;
};

// The polynomial change of coordinates carrying the prepared surface
// relation onto x_1^{k+1} + x_2 x_1^{k-1} + ... + x_{k+1} = 0.  Inputs
// a_1..a_k and b are jets in (y_2, ..., y_m), in that variable order.
template <class S>
BetaResult<S> build_beta(const std::vector<Jet<S>>& a, const Jet<S>& b, int k, int m) {
    if (k < 1 || k > m - 1)
        throw input_error("contact order out of range for this dimension");
    if (static_cast<int>(a.size()) != k)
        throw input_error("expected exactly k coefficient jets a_1..a_k");
    const int n = b.order();
    for (const auto& ai : a)
        if (ai.nvars() != m - 1 || ai.order() != n)
            throw input_error("coefficient jets must share variables (y_2..y_m) and order");
    if (b.nvars() != m - 1)
        throw input_error("coefficient jets must share variables (y_2..y_m) and order");

    // Lift from (y_2..y_m) to ambient (y_1..y_m).
    std::vector<int> emb(m - 1);
    for (int i = 0; i < m - 1; ++i)
        emb[i] = i + 1;
    std::vector<Jet<S>> al;
    al.reserve(k);
    for (const auto& ai : a)
        al.push_back(ai.embedded(m, emb));
    const Jet<S> bl = b.embedded(m, emb);

    const S kp1 = scalar_traits<S>::from_int(k + 1);
    const Jet<S> t1 = al[k - 1].scaled(-scalar_traits<S>::one() / kp1);  // -a_k/(k+1)

    std::vector<Jet<S>> comps(m, Jet<S>(m, n));
    comps[0] = Jet<S>::variable(m, n, 0) - t1;
    for (int j = 1; j <= k - 1; ++j) {
        Jet<S> c = detail::jet_power(t1, k + 1 - j).scaled(detail::binomial<S>(k + 1, j));
        for (int i = j; i <= k; ++i)
            c += detail::jet_power(t1, i - j).scaled(detail::binomial<S>(i, j)) * al[i - 1];
        comps[k - j] = std::move(c);
    }
    {
        // Constant-in-y_1 group of the expansion.  Completing the power
        // (y_1 + a_k/(k+1))^{k+1} leaves -k (-a_k/(k+1))^{k+1}; carrying
        // the k=1 and k=2 cases through by hand fixes this sign.
        Jet<S> c = -bl - detail::jet_power(t1, k + 1).scaled(scalar_traits<S>::from_int(k));
        for (int i = 1; i <= k - 1; ++i)
            c += detail::jet_power(t1, i) * al[i - 1];
        comps[k] = std::move(c);
    }
    for (int i = k + 1; i < m - 1; ++i)
        comps[i] = Jet<S>::variable(m, n, i);
    if (k + 1 < m)
        comps[m - 1] = Jet<S>::variable(m, n, k);

    BetaResult<S> out{JetMap<S>(std::move(comps)), scalar_traits<S>::zero(),
                      b.linear_coeff(m - 2), {}, scalar_traits<S>::one()};
    out.det_dbeta = detail::determinant(out.beta.linear_matrix());
    if (k >= 2) {
        out.a_matrix.assign(k - 1, std::vector<S>(k - 1, scalar_traits<S>::zero()));
        for (int i = 1; i <= k - 1; ++i)
            for (int j = 2; j <= k; ++j)
                out.a_matrix[i - 1][j - 2] = a[i - 1].linear_coeff(j - 2);
        out.det_a = detail::determinant(out.a_matrix);
    }
    if (b.negligible(out.det_dbeta))
        throw precondition_error("linear part of the surface change of coordinates is singular");
    return out;
}

// The final change of coordinates: integrates the surface polynomial so
// that each component is the d/dx_1 derivative of the previous one.
template <class S>
JetMap<S> build_gamma(int k, int m, int order) {
    if (k < 1 || k > m - 1)
        throw input_error("contact order out of range for this dimension");
    std::vector<Jet<S>> comps;
    comps.reserve(m);
    const S kf = detail::factorial<S>(k + 1);
    for (int i = 1; i <= k + 1; ++i) {
        Jet<S> c(m, order);
        {
            Exponent e(m, 0);
            e[0] = k + 2 - i;
            c.add_term(e, scalar_traits<S>::one() / detail::factorial<S>(k + 2 - i));
        }
        for (int l = 2; l <= k + 2 - i; ++l) {
            Exponent e(m, 0);
            e[0] = k + 2 - i - l;
            e[l - 1] += 1;
            c.add_term(e, detail::factorial<S>(k + 1 - l) /
                              (kf * detail::factorial<S>(k + 2 - i - l)));
        }
        comps.push_back(std::move(c));
    }
    for (int i = k + 2; i <= m; ++i)
        comps.push_back(Jet<S>::variable(m, order, i - 1));
    return JetMap<S>(std::move(comps));
}

template <class S>
struct NormalFormTrace {
    int axis;
    JetMap<S> alpha_hat;
    std::vector<int> tau;
    Jet<S> Phi;
    JetMap<S> alpha_check;
    std::vector<S> shear_coeffs;
    Jet<S> phi;
    std::vector<int> sigma;
    Jet<S> phi_sigma;
    std::vector<Jet<S>> a;
    Jet<S> b;
    JetMap<S> beta;
    JetMap<S> gamma;
    std::vector<std::vector<S>> a_matrix;
    std::vector<std::vector<S>> b_bar_matrix;
    S det_dbeta;
    S b_partial_last;
    S det_a;
};

template <class S>
struct NormalFormResult {
    int k;
    int m;
    int order;
    ContactReport<S> contact;
    JetMap<S> psi;
    JetMap<S> psi_inv;
    VectorField<S> model;
    VectorField<S> residual_field;  // order N-1
    Jet<S> residual_surface;        // order N, m-1 variables
    NormalFormTrace<S> trace;
};

namespace detail {

// Surface parametrization pivot: the coordinate whose partial of h at 0
// anchors the graph form of the surface.
template <class S>
int surface_pivot(const Jet<S>& h) {
    if constexpr (is_exact_v<S>) {
        for (int j = 0; j < h.nvars(); ++j)
            if (!scalar_traits<S>::is_zero(h.linear_coeff(j)))
                return j;
    } else {
        int best_j = -1;
        double best = 0.0;
        for (int j = 0; j < h.nvars(); ++j) {
            const double v = std::abs(scalar_traits<S>::to_double(h.linear_coeff(j)));
            if (v > best) {
                best = v;
                best_j = j;
            }
        }
        if (best_j >= 0 && !h.negligible(h.linear_coeff(best_j)))
            return best_j;
    }
    throw input_error("surface is singular at the base point: gradient of h vanishes");
}

inline std::vector<int> inverse_permutation(const std::vector<int>& p) {
    std::vector<int> inv(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        inv[p[i]] = static_cast<int>(i);
    return inv;
}

}  // namespace detail

// Substitutes the graph relation into the prepared identity:
// y_1^{k+1} + sum_i y_1^i a_i(y_2..y_{m-1}, phi) - b(y_2..y_{m-1}, phi).
// Zero through the shared order exactly when the preparation data
// matches the graph.
template <class S>
Jet<S> preparation_identity_residual(const std::vector<Jet<S>>& a, const Jet<S>& b,
                                     const Jet<S>& phi_sigma, int k) {
    const int nv = phi_sigma.nvars();  // m-1
    const int n = phi_sigma.order();
    std::vector<Jet<S>> comps;
    comps.reserve(nv);
    for (int i = 1; i < nv; ++i)
        comps.push_back(Jet<S>::variable(nv, n, i));
    comps.push_back(phi_sigma);
    const JetMap<S> subst{std::move(comps)};

    // a_i is certified through n - i; the padded coefficients sit at
    // degrees > n - i and meet a factor y_1^i below, so they never reach
    // degree <= n of the residual.
    const Jet<S> y1 = Jet<S>::variable(nv, n, 0);
    Jet<S> res = detail::jet_power(y1, k + 1);
    for (int i = 1; i <= k; ++i) {
        const Jet<S> ai =
            a[i - 1].order() >= n ? a[i - 1].truncated(n) : a[i - 1].assume_polynomial(n);
        res += detail::jet_power(y1, i) * compose(ai, subst);
    }
    const Jet<S> bn = b.order() >= n ? b.truncated(n) : b.assume_polynomial(n);
    res -= compose(bn, subst);
    return res;
}

// Full pipeline: contact classification, flow box, graph form of the
// surface, shear, column relabeling, Weierstrass preparation, then the
// beta and gamma coordinate changes.  The returned psi conjugates X to
// the linear model through order N-1 and flattens the surface onto
// {x_1 = 0} through order N.
//
// The division remainder a_i is certified only through N - i, and beta
// consumes it zero-padded to order N.  That padding is harmless for
// every identity this routine reports: wherever a_i enters psi or the
// prepared relation it carries a factor of order >= i (a power of y_1 or
// of the shift a_k/(k+1)), so the uncertified degrees N-i+1..N of a_i
// land beyond degree N and are truncated away.  The field residual never
// sees a_i at all: the conjugation of d/dy_1 by gamma o beta only uses
// that a_i is independent of y_1.
template <class S>
NormalFormResult<S> vishik_normal_form(const VectorField<S>& x_in, const Jet<S>& h_in, int order,
                                       const NormalFormOptions& opts = {}) {
    require_field(x_in);
    require_surface(h_in);
    const int m = x_in.nvars();
    if (h_in.nvars() != m)
        throw input_error("surface and field live in different variable counts");
    if (order < 1)
        throw input_error("truncation order must be positive");
    if (x_in.order() < order || h_in.order() < order)
        throw input_error("inputs are not certified to the requested order");

    const int n = order;
    const VectorField<S> x = x_in.truncated(n);
    const Jet<S> h = h_in.truncated(n);

    const ContactReport<S> contact = contact_order(x, h, std::min(m - 1, n - 1));
    const int k = contact.k;
    if (k == 0)
        throw precondition_error(
            "field is transversal to the surface at the base point: not a contact");
    if (!contact.simple)
        throw precondition_error("contact is not simple: Lie-derivative gradients have rank " +
                                 std::to_string(contact.rank) + " < " + std::to_string(k + 1));
    if (n < k + 2)
        throw precondition_error("order budget too small: a k-contact needs order >= k+2, got " +
                                 std::to_string(n));

    // Flow box around the base point.
    FlowBoxFrame<S> frame = flow_box_frame(x, opts.transversal_axis);

    // Surface as a graph over the first m-1 chart coordinates; f_hat is
    // the surface equation in the flow-box chart, already in hand, so
    // the straightening solve reuses it instead of inverting alpha_hat.
    const Jet<S> f_hat = compose(h, frame.forward);
    if (!f_hat.negligible(f_hat.linear_coeff(0)))
        throw internal_error("flow-box chart lost the tangency: time-partial of f is nonzero");
    StraightenResult<S> st = detail::straighten_given(f_hat, opts.implicit_pivot);
    if (!st.Phi.negligible(st.Phi.linear_coeff(0)))
        throw internal_error("graph function has a linear time term despite the contact");

    // Shear off the middle linear terms.
    const JetMap<S> alpha_check = shear(st.Phi);
    std::vector<S> shear_coeffs;
    for (int i = 1; i <= m - 2; ++i)
        shear_coeffs.push_back(st.Phi.linear_coeff(i));
    const Jet<S> phi = shifted_graph(st.Phi);

    // Column relabeling for the mixed-derivative block.
    std::vector<int> sigma;
    if (opts.column_permutation) {
        sigma = *opts.column_permutation;
        if (static_cast<int>(sigma.size()) != m || sigma[0] != 0 || sigma[m - 1] != m - 1)
            throw input_error("column permutation must fix the first and last coordinates");
        std::vector<bool> seen(m, false);
        for (int v : sigma) {
            if (v < 0 || v >= m || seen[v])
                throw input_error("column permutation is not a permutation");
            seen[v] = true;
        }
    } else {
        sigma = choose_column_permutation(phi, k);
    }
    const std::vector<std::vector<S>> b_bar = mixed_block(phi, k, sigma);
    if (phi.negligible(detail::determinant(b_bar)))
        throw precondition_error("mixed-derivative block is singular under the chosen relabeling");

    const std::vector<int> sigma_inv = detail::inverse_permutation(sigma);
    const Jet<S> phi_sigma = compose(
        phi, JetMap<S>::permutation(m - 1, phi.order(),
                                    std::vector<int>(sigma_inv.begin(), sigma_inv.end() - 1)));

    // Weierstrass preparation of the relabeled graph; reorder the data
    // to (y_2, ..., y_m) with the substituted variable last.  The trace
    // keeps each a_i at its certified order n - i; beta consumes the
    // zero-padded representatives (see the note above the function).
    PreparationResult<S> prep = prepare(phi_sigma, k + 1);
    std::vector<int> reorder(m - 1);
    reorder[0] = m - 2;
    for (int i = 1; i <= m - 2; ++i)
        reorder[i] = i - 1;
    std::vector<Jet<S>> a;
    std::vector<Jet<S>> a_padded;
    a.reserve(k);
    a_padded.reserve(k);
    for (int i = 0; i < k; ++i) {
        a.push_back(prep.a[i].embedded(m - 1, reorder));
        a_padded.push_back(a.back().assume_polynomial(n));
    }
    const Jet<S> b = prep.b.embedded(m - 1, reorder);

    BetaResult<S> beta = build_beta(a_padded, b, k, m);
    const JetMap<S> gamma = build_gamma<S>(k, m, n);

    // Assemble psi = gamma o beta o sigma o shear o tau o alpha_hat.
    const JetMap<S> w = compose(
        JetMap<S>::permutation(m, n, sigma),
        compose(alpha_check,
                compose(JetMap<S>::permutation(m, n, st.tau), frame.alpha_hat)));
    const JetMap<S> psi = compose(gamma, compose(beta.beta, w));
    const JetMap<S> psi_inv = invert(psi);
    const VectorField<S> model = model_contact_field<S>(k, m, n);

    // Residuals: conjugated field minus the model, and the first psi
    // component along a graph parametrization of the surface.
    VectorField<S> pushed = pushforward(psi, x);
    std::vector<Jet<S>> res_comps;
    res_comps.reserve(m);
    for (int i = 0; i < m; ++i)
        res_comps.push_back(pushed.comp(i) - model.comp(i).truncated(n - 1));
    VectorField<S> residual_field{std::move(res_comps)};

    const int spiv = detail::surface_pivot(h);
    const Jet<S> surface_graph = solve_implicit(h, spiv);
    const Jet<S> residual_surface = compose(psi.comp(0), graph_map(surface_graph, spiv));

    NormalFormTrace<S> trace{frame.axis,
                             frame.alpha_hat,
                             st.tau,
                             st.Phi,
                             alpha_check,
                             std::move(shear_coeffs),
                             phi,
                             sigma,
                             phi_sigma,
                             a,
                             b,
                             beta.beta,
                             gamma,
                             beta.a_matrix,
                             b_bar,
                             beta.det_dbeta,
                             beta.b_partial_last,
                             beta.det_a};

    return NormalFormResult<S>{k,
                               m,
                               n,
                               contact,
                               psi,
                               psi_inv,
                               model,
                               std::move(residual_field),
                               residual_surface,
                               std::move(trace)};
}

struct VerifyReport {
    std::vector<double> field_max_by_degree;
    std::vector<double> surface_max_by_degree;
    std::vector<double> roundtrip_max_by_degree;
    bool field_zero;
    bool surface_zero;
};

// Recomputes both conjugation residuals from the inputs and the stored
// psi alone, through formulas disjoint from the construction: the field
// residual via the chain rule D(psi) . X - model(psi) (no inversion, no
// pushforward) and the surface residual via Weierstrass division of
// psi_1 by h (no implicit solve).
template <class S>
VerifyReport verify(const NormalFormResult<S>& nf, const VectorField<S>& x_in,
                    const Jet<S>& h_in) {
    const int m = nf.m;
    const int n = nf.order;
    const VectorField<S> x = x_in.truncated(n);
    const Jet<S> h = h_in.truncated(n);
    const int k = nf.k;

    VerifyReport report{};
    report.field_max_by_degree.assign(n, 0.0);

    for (int i = 0; i < m; ++i) {
        Jet<S> r(m, n - 1);
        for (int j = 0; j < m; ++j)
            r += nf.psi.comp(i).derivative(j).truncated(n - 1) * x.comp(j).truncated(n - 1);
        if (i < k)
            r -= nf.psi.comp(i + 1).truncated(n - 1);
        else if (i == k)
            r -= Jet<S>::constant(m, n - 1, scalar_traits<S>::one());
        const auto by_deg = r.max_abs_by_degree();
        for (int d = 0; d < static_cast<int>(by_deg.size()); ++d)
            report.field_max_by_degree[d] = std::max(report.field_max_by_degree[d], by_deg[d]);
        report.field_zero = (i == 0 ? true : report.field_zero) && r.is_zero();
    }

    // Surface residual: bring the pivot coordinate to the front and
    // divide psi_1 by h; the order-zero remainder is the restriction of
    // psi_1 to the surface.
    const int spiv = detail::surface_pivot(h);
    std::vector<int> swap_perm(m);
    for (int i = 0; i < m; ++i)
        swap_perm[i] = i;
    std::swap(swap_perm[0], swap_perm[spiv]);
    const JetMap<S> pswap = JetMap<S>::permutation(m, n, swap_perm);
    const Jet<S> h_r = compose(h, pswap);
    const Jet<S> psi1_r = compose(nf.psi.comp(0), pswap);
    std::vector<int> emb(m);
    emb[0] = 0;
    for (int i = 1; i < m; ++i)
        emb[i] = i + 1;
    const Jet<S> d = h_r.embedded(m + 1, emb);
    const DivisionResult<S> div = weierstrass_divide(psi1_r, d, 1);
    const Jet<S>& r0 = div.remainders[0];
    report.surface_max_by_degree = r0.max_abs_by_degree();
    report.surface_zero = r0.is_zero();

    // Chart round trip, as a sanity diagnostic.
    const JetMap<S> rt = compose(nf.psi, nf.psi_inv);
    const JetMap<S> id = JetMap<S>::identity(m, n);
    report.roundtrip_max_by_degree.assign(n + 1, 0.0);
    for (int i = 0; i < m; ++i) {
        const auto by_deg = (rt.comp(i) - id.comp(i)).max_abs_by_degree();
        for (int d2 = 0; d2 < static_cast<int>(by_deg.size()); ++d2)
            report.roundtrip_max_by_degree[d2] =
                std::max(report.roundtrip_max_by_degree[d2], by_deg[d2]);
    }
    return report;
}

}  // namespace visnf
