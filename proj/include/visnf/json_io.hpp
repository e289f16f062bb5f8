#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "visnf/contact.hpp"
#include "visnf/half_map.hpp"
#include "visnf/normal_form.hpp"

namespace visnf {

using json = nlohmann::ordered_json;

// Scalars serialize as decimal strings in exact mode (lossless) and as
// plain JSON numbers in double mode.
inline json scalar_to_json(const Rational& c) {
    return c.get_str();
}
inline json scalar_to_json(double c) {
    return c;
}

template <class S>
json matrix_to_json(const std::vector<std::vector<S>>& m) {
    json rows = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const S& v : row)
            r.push_back(scalar_to_json(v));
        rows.push_back(std::move(r));
    }
    return rows;
}

template <class S>
json jet_to_json(const Jet<S>& j) {
    json out;
    out["nvars"] = j.nvars();
    out["order"] = j.order();
    out["mode"] = is_exact_v<S> ? "exact" : "float";
    json terms = json::array();
    for (const auto& [e, c] : j.terms()) {
        json t;
        t["exp"] = e;
        if constexpr (is_exact_v<S>) {
            t["num"] = c.get_num().get_str();
            t["den"] = c.get_den().get_str();
        } else {
            t["coef"] = c;
        }
        terms.push_back(std::move(t));
    }
    out["terms"] = std::move(terms);
    return out;
}

template <class S>
json map_to_json(const JetMap<S>& f) {
    json out = json::array();
    for (const auto& c : f.components())
        out.push_back(jet_to_json(c));
    return out;
}

namespace detail {

inline const json& require_field_json(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw input_error(std::string("missing field '") + key + "' in JSON object");
    return j.at(key);
}

}  // namespace detail

template <class S>
Jet<S> jet_from_json(const json& j) {
    const int nvars = detail::require_field_json(j, "nvars").get<int>();
    const int order = detail::require_field_json(j, "order").get<int>();
    const std::string mode = detail::require_field_json(j, "mode").get<std::string>();
    const std::string expected = is_exact_v<S> ? "exact" : "float";
    if (mode != expected)
        throw input_error("jet mode '" + mode + "' does not match the requested arithmetic");
    Jet<S> out(nvars, order);
    for (const json& t : detail::require_field_json(j, "terms")) {
        const auto exp = detail::require_field_json(t, "exp").get<std::vector<int>>();
        if constexpr (is_exact_v<S>) {
            const std::string num = detail::require_field_json(t, "num").get<std::string>();
            const std::string den = detail::require_field_json(t, "den").get<std::string>();
            out.add_term(exp, parse_rational(num + "/" + den));
        } else {
            out.add_term(exp, detail::require_field_json(t, "coef").get<double>());
        }
    }
    return out;
}

template <class S>
JetMap<S> map_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw input_error("expected a nonempty JSON array of jets");
    std::vector<Jet<S>> comps;
    comps.reserve(j.size());
    for (const json& c : j)
        comps.push_back(jet_from_json<S>(c));
    return JetMap<S>(std::move(comps));
}

template <class S>
json contact_to_json(const ContactReport<S>& r) {
    json out;
    out["k"] = r.k;
    out["simple"] = r.simple;
    out["rank"] = r.rank;
    out["leading_lie_derivative"] = scalar_to_json(r.leading);
    out["gradients"] = matrix_to_json(r.gradients);
    return out;
}

template <class S>
json normal_form_to_json(const NormalFormResult<S>& nf) {
    json out;
    out["k"] = nf.k;
    out["m"] = nf.m;
    out["psi"] = map_to_json(nf.psi);
    out["psi_inv"] = map_to_json(nf.psi_inv);

    json trace;
    trace["alpha_hat"] = map_to_json(nf.trace.alpha_hat);
    trace["transversal_permutation"] = nf.trace.tau;
    trace["Phi"] = jet_to_json(nf.trace.Phi);
    trace["alpha_check"] = map_to_json(nf.trace.alpha_check);
    trace["phi"] = jet_to_json(nf.trace.phi);
    trace["column_permutation"] = nf.trace.sigma;
    json a = json::array();
    for (const auto& ai : nf.trace.a)
        a.push_back(jet_to_json(ai));
    trace["a"] = std::move(a);
    trace["b"] = jet_to_json(nf.trace.b);
    trace["beta"] = map_to_json(nf.trace.beta);
    trace["gamma"] = map_to_json(nf.trace.gamma);
    trace["A_matrix"] = matrix_to_json(nf.trace.a_matrix);
    trace["B_bar_matrix"] = matrix_to_json(nf.trace.b_bar_matrix);
    trace["det_Dbeta"] = scalar_to_json(nf.trace.det_dbeta);
    out["trace"] = std::move(trace);

    std::vector<double> field_max(nf.order, 0.0);
    for (const auto& c : nf.residual_field.components()) {
        const auto by_deg = c.max_abs_by_degree();
        for (int d = 0; d < static_cast<int>(by_deg.size()); ++d)
            field_max[d] = std::max(field_max[d], by_deg[d]);
    }
    json res;
    res["field"] = field_max;
    res["surface"] = nf.residual_surface.max_abs_by_degree();
    out["residual_max_by_degree"] = std::move(res);
    return out;
}

template <class S>
json half_map_to_json(const HalfMapResult<S>& hm) {
    json out;
    out["Q"] = map_to_json(hm.Q);
    out["flight_time"] = jet_to_json(hm.flight_time);
    out["involution_residual_max"] = scalar_to_json(hm.involution_max);
    return out;
}

inline json verify_to_json(const VerifyReport& r) {
    json out;
    out["field_max_by_degree"] = r.field_max_by_degree;
    out["surface_max_by_degree"] = r.surface_max_by_degree;
    out["roundtrip_max_by_degree"] = r.roundtrip_max_by_degree;
    out["field_zero"] = r.field_zero;
    out["surface_zero"] = r.surface_zero;
    return out;
}

}  // namespace visnf
