#pragma once

#include <string>
#include <utility>
#include <vector>

#include "visnf/normal_form.hpp"

namespace visnf {

// Poincare half map data at a fold.  Q lives on the m-1 surface
// coordinates of the chart induced by the normalizing diffeomorphism;
// P_normal is the model involution in those coordinates.
template <class S>
struct HalfMapResult {
    JetMap<S> Q;
    JetMap<S> P_normal;
    Jet<S> flight_time;
    std::vector<double> involution_residual;  // max |coeff| of QoQ - id per degree
    S involution_max;                         // same residual as an exact scalar
};

template <class S>
struct NormalHalfMap {
    JetMap<S> P;
    Jet<S> flight_time;
};

// Half map of the fold model on its own surface {x_1 = 0}: follows the
// parabolic orbit x_1 + t x_2 + t^2/2 back to the surface.  The return
// time is t = -2 x_2, which makes P = (-x_2, x_3, ..., x_m).
template <class S>
NormalHalfMap<S> normal_half_map(int m, int order) {
    if (m < 2)
        throw input_error("half map needs an ambient dimension of at least 2");
    if (order < 1)
        throw input_error("truncation order must be positive");

    const VectorField<S> model = model_contact_field<S>(1, m, order);
    const JetMap<S> fl = flow(model);  // m comps in (t, x_1..x_m)

    const int nv = m - 1;  // surface coordinates s = (x_2, ..., x_m)
    const Jet<S> minus_two_s1 =
        Jet<S>::variable(nv, order, 0).scaled(scalar_traits<S>::from_int(-2));
    std::vector<Jet<S>> subst;
    subst.reserve(m + 1);
    subst.push_back(minus_two_s1);        // t = -2 s_1
    subst.push_back(Jet<S>(nv, order));   // x_1 = 0 on the surface
    for (int i = 0; i < nv; ++i)
        subst.push_back(Jet<S>::variable(nv, order, i));
    const JetMap<S> landed = compose(fl, JetMap<S>(std::move(subst)));

    const Jet<S>& back = landed.comp(0);
    if constexpr (is_exact_v<S>) {
        if (!back.is_zero())
            throw internal_error("fold return map missed the surface");
    } else {
        if (back.max_abs_coeff() >
            float_zero_threshold * std::max(1.0, landed.comp(1).max_abs_coeff()))
            throw internal_error("fold return map missed the surface");
    }

    std::vector<Jet<S>> comps(landed.components().begin() + 1, landed.components().end());
    return NormalHalfMap<S>{JetMap<S>(std::move(comps)), minus_two_s1};
}

// Conjugates the model involution P = (0, -x_2, x_3, ..., x_m) through
// the normalizing chart and restricts to the surface coordinates: the
// chart is s -> psi^{-1}(0, s), and Q reads the composite back through
// psi.  With exact coefficients the jet identities collapse Q to the
// model involution itself; in double mode the residuals report how far
// roundoff pushes it off.
template <class S>
HalfMapResult<S> pullback_half_map(const NormalFormResult<S>& nf) {
    if (nf.k != 1)
        throw precondition_error("half maps are defined only at fold contacts (k = 1), got k = " +
                                 std::to_string(nf.k));
    const int m = nf.m;
    const int n = nf.order;

    std::vector<Jet<S>> p_comps;
    p_comps.reserve(m);
    p_comps.push_back(Jet<S>(m, n));
    p_comps.push_back(-Jet<S>::variable(m, n, 1));
    for (int i = 2; i < m; ++i)
        p_comps.push_back(Jet<S>::variable(m, n, i));
    const JetMap<S> p_amb{std::move(p_comps)};

    std::vector<Jet<S>> iota_comps;
    iota_comps.reserve(m);
    iota_comps.push_back(Jet<S>(m - 1, n));
    for (int i = 1; i < m; ++i)
        iota_comps.push_back(Jet<S>::variable(m - 1, n, i - 1));
    const JetMap<S> iota{std::move(iota_comps)};

    const JetMap<S> chart = compose(nf.psi_inv, iota);
    const JetMap<S> q_amb = compose(nf.psi_inv, compose(p_amb, nf.psi));
    const JetMap<S> lifted = compose(nf.psi, compose(q_amb, chart));

    const Jet<S>& first = lifted.comp(0);
    if constexpr (is_exact_v<S>) {
        if (!first.is_zero())
            throw internal_error("pulled-back half map left the surface chart");
    } else {
        if (first.max_abs_coeff() >
            float_zero_threshold * std::max(1.0, lifted.comp(1).max_abs_coeff()))
            throw internal_error("pulled-back half map left the surface chart");
    }
    std::vector<Jet<S>> q_comps(lifted.components().begin() + 1, lifted.components().end());
    JetMap<S> q{std::move(q_comps)};

    NormalHalfMap<S> normal = normal_half_map<S>(m, n);

    std::vector<double> residual(n + 1, 0.0);
    S residual_max = scalar_traits<S>::zero();
    const JetMap<S> qq = compose(q, q);
    const JetMap<S> id = JetMap<S>::identity(m - 1, n);
    for (int i = 0; i < m - 1; ++i) {
        const Jet<S> diff = qq.comp(i) - id.comp(i);
        const auto by_deg = diff.max_abs_by_degree();
        for (int d = 0; d < static_cast<int>(by_deg.size()); ++d)
            residual[d] = std::max(residual[d], by_deg[d]);
        for (const auto& [e, c] : diff.terms()) {
            const S a = scalar_traits<S>::abs(c);
            if (a > residual_max)
                residual_max = a;
        }
    }

    return HalfMapResult<S>{std::move(q), std::move(normal.P), std::move(normal.flight_time),
                            std::move(residual), std::move(residual_max)};
}

}  // namespace visnf
