#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "visnf/errors.hpp"
#include "visnf/scalar.hpp"

namespace visnf {

using Exponent = std::vector<int>;

inline int total_degree(const Exponent& e) {
    return std::accumulate(e.begin(), e.end(), 0);
}

// Graded lexicographic order: lower total degree first, then plain
// lexicographic comparison of exponent vectors.  This is the canonical
// term order for serialization and iteration everywhere.
struct GradedLexLess {
    bool operator()(const Exponent& a, const Exponent& b) const {
        const int da = total_degree(a);
        const int db = total_degree(b);
        if (da != db)
            return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

// Truncated multivariate power series: all terms of total degree <= order
// are certified, everything beyond is unknown and never stored.  Terms
// with zero coefficient are dropped, so equal jets have equal term maps.
template <class S>
class Jet {
public:
    using term_map = std::map<Exponent, S, GradedLexLess>;

    Jet(int nvars, int order) : nvars_(nvars), order_(order) {
        if (nvars < 1)
            throw input_error("jet needs at least one variable");
        if (order < 0)
            throw input_error("jet order must be nonnegative");
    }

    static Jet constant(int nvars, int order, const S& c) {
        Jet j(nvars, order);
        j.add_term(Exponent(nvars, 0), c);
        return j;
    }

    static Jet variable(int nvars, int order, int index) {
        Jet j(nvars, order);
        if (index < 0 || index >= nvars)
            throw input_error("variable index out of range");
        if (order >= 1) {
            Exponent e(nvars, 0);
            e[index] = 1;
            j.add_term(e, scalar_traits<S>::one());
        }
        return j;
    }

    static Jet monomial(int nvars, int order, const Exponent& e, const S& c) {
        Jet j(nvars, order);
        j.add_term(e, c);
        return j;
    }

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    const term_map& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Adds c to the coefficient of e.  Terms beyond the truncation order
    // are silently discarded; that is what truncation means here.
    void add_term(const Exponent& e, const S& c) {
        check_exponent(e);
        if (total_degree(e) > order_ || scalar_traits<S>::is_zero(c))
            return;
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (scalar_traits<S>::is_zero(it->second))
                terms_.erase(it);
        }
    }

    S coeff(const Exponent& e) const {
        check_exponent(e);
        auto it = terms_.find(e);
        return it == terms_.end() ? scalar_traits<S>::zero() : it->second;
    }

    S constant_term() const { return coeff(Exponent(nvars_, 0)); }

    S linear_coeff(int index) const {
        Exponent e(nvars_, 0);
        if (index < 0 || index >= nvars_)
            throw input_error("variable index out of range");
        e[index] = 1;
        return order_ >= 1 ? coeff(e) : scalar_traits<S>::zero();
    }

    double max_abs_coeff() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_)
            m = std::max(m, std::abs(scalar_traits<S>::to_double(c)));
        return m;
    }

    // Zero test used at decision points.  Exact mode: literal zero.
    // Double mode: relative to the largest coefficient of this jet,
    // with floor 1 so a jet of tiny noise counts as zero.
    bool negligible(const S& c) const {
        if constexpr (is_exact_v<S>)
            return scalar_traits<S>::is_zero(c);
        else
            return std::abs(c) <= float_zero_threshold * std::max(1.0, max_abs_coeff());
    }

    // Terms of total degree exactly d, kept at the same truncation order.
    Jet homogeneous_part(int d) const {
        Jet out(nvars_, order_);
        if (d < 0 || d > order_)
            return out;
        for (const auto& [e, c] : terms_) {
            const int deg = total_degree(e);
            if (deg > d)
                break;
            if (deg == d)
                out.terms_.emplace(e, c);
        }
        return out;
    }

    Jet truncated(int new_order) const {
        if (new_order > order_)
            throw input_error("cannot raise jet order: tail terms are not certified");
        Jet out(nvars_, new_order);
        for (const auto& [e, c] : terms_) {
            if (total_degree(e) > new_order)
                break;
            out.terms_.emplace(e, c);
        }
        return out;
    }

    // Reinterprets the jet as an exact polynomial and certifies it to a
    // higher order, i.e. picks the polynomial representative of the jet
    // class.  Callers own the justification; ordinary truncation-order
    // arithmetic must use truncated() instead.
    Jet assume_polynomial(int new_order) const {
        if (new_order < order_)
            return truncated(new_order);
        Jet out(nvars_, new_order);
        for (const auto& [e, c] : terms_)
            out.terms_.emplace(e, c);
        return out;
    }

    // Renames variables: exponent of old variable i moves to slot var_map[i]
    // in a fresh jet with new_nvars variables.  Distinct slots required.
    Jet embedded(int new_nvars, const std::vector<int>& var_map) const {
        if (static_cast<int>(var_map.size()) != nvars_)
            throw input_error("variable map size mismatch");
        Jet out(new_nvars, order_);
        for (const auto& [e, c] : terms_) {
            Exponent ne(new_nvars, 0);
            for (int i = 0; i < nvars_; ++i) {
                if (var_map[i] < 0 || var_map[i] >= new_nvars)
                    throw input_error("variable map target out of range");
                ne[var_map[i]] += e[i];
            }
            out.add_term(ne, c);
        }
        return out;
    }

    Jet derivative(int index) const {
        if (order_ < 1)
            throw input_error("cannot differentiate an order-0 jet: no term is certified");
        if (index < 0 || index >= nvars_)
            throw input_error("variable index out of range");
        Jet out(nvars_, order_ - 1);
        for (const auto& [e, c] : terms_) {
            if (e[index] == 0)
                continue;
            Exponent ne = e;
            ne[index] -= 1;
            out.add_term(ne, c * scalar_traits<S>::from_int(e[index]));
        }
        return out;
    }

    Jet operator-() const {
        Jet out(nvars_, order_);
        for (const auto& [e, c] : terms_)
            out.terms_.emplace(e, -c);
        return out;
    }

    Jet& operator+=(const Jet& rhs) {
        require_compatible(rhs);
        for (const auto& [e, c] : rhs.terms_)
            add_term(e, c);
        return *this;
    }

    Jet& operator-=(const Jet& rhs) {
        require_compatible(rhs);
        for (const auto& [e, c] : rhs.terms_)
            add_term(e, -c);
        return *this;
    }

    friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
    friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }

    friend Jet operator*(const Jet& lhs, const Jet& rhs) {
        lhs.require_compatible(rhs);
        Jet out(lhs.nvars_, lhs.order_);
        for (const auto& [ea, ca] : lhs.terms_) {
            const int da = total_degree(ea);
            for (const auto& [eb, cb] : rhs.terms_) {
                if (da + total_degree(eb) > lhs.order_)
                    break;
                Exponent e(lhs.nvars_);
                for (int i = 0; i < lhs.nvars_; ++i)
                    e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }

    Jet scaled(const S& c) const {
        Jet out(nvars_, order_);
        for (const auto& [e, coeff] : terms_)
            out.add_term(e, coeff * c);
        return out;
    }

    friend bool operator==(const Jet& lhs, const Jet& rhs) {
        return lhs.nvars_ == rhs.nvars_ && lhs.order_ == rhs.order_ && lhs.terms_ == rhs.terms_;
    }
    friend bool operator!=(const Jet& lhs, const Jet& rhs) { return !(lhs == rhs); }

    // Largest |coefficient| per total degree, for residual reports.
    std::vector<double> max_abs_by_degree() const {
        std::vector<double> out(order_ + 1, 0.0);
        for (const auto& [e, c] : terms_) {
            const int d = total_degree(e);
            out[d] = std::max(out[d], std::abs(scalar_traits<S>::to_double(c)));
        }
        return out;
    }

    std::string to_string(const std::vector<std::string>& names = {}) const {
        if (terms_.empty())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            os << (first ? "" : " + ") << scalar_traits<S>::to_string(c);
            for (int i = 0; i < nvars_; ++i) {
                if (e[i] == 0)
                    continue;
                os << "*";
                if (static_cast<int>(names.size()) == nvars_)
                    os << names[i];
                else
                    os << "v" << i + 1;
                if (e[i] > 1)
                    os << "^" << e[i];
            }
            first = false;
        }
        return os.str();
    }

private:
    void check_exponent(const Exponent& e) const {
        if (static_cast<int>(e.size()) != nvars_)
            throw input_error("exponent length does not match variable count");
        for (int v : e)
            if (v < 0)
                throw input_error("negative exponent");
    }

    void require_compatible(const Jet& rhs) const {
        if (nvars_ != rhs.nvars_)
            throw input_error("jets live in different variable counts");
        if (order_ != rhs.order_)
            throw input_error("order mismatch: jets must share a truncation order");
    }

    int nvars_;
    int order_;
    term_map terms_;
};

template <class To, class From>
Jet<To> jet_cast(const Jet<From>& j) {
    Jet<To> out(j.nvars(), j.order());
    for (const auto& [e, c] : j.terms())
        out.add_term(e, scalar_cast<To>(c));
    return out;
}

}  // namespace visnf
