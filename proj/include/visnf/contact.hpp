#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <string>
#include <vector>

#include "visnf/vector_field.hpp"

namespace visnf {

// Surface data: the zero level set of h through the origin, with a
// regular gradient there.  Throws on violations.
template <class S>
void require_surface(const Jet<S>& h) {
    if (h.order() < 1)
        throw input_error("surface function needs at least order 1");
    if (!h.negligible(h.constant_term()))
        throw input_error("base point is not on the surface: h(p) != 0");
    bool nonzero = false;
    for (int j = 0; j < h.nvars(); ++j)
        nonzero = nonzero || !h.negligible(h.linear_coeff(j));
    if (!nonzero)
        throw input_error("surface is singular at the base point: gradient of h vanishes");
}

template <class S>
struct ContactReport {
    int k = 0;
    bool simple = false;
    S leading = scalar_traits<S>::zero();       // X^{k+1} h at the base point
    std::vector<std::vector<S>> gradients;      // rows grad X^i h (0), i = 0..k
    int rank = 0;
};

namespace detail {

// Rank over the rationals: scale each row integral, then fraction-free
// (Bareiss) elimination so every intermediate stays an exact integer.
inline int matrix_rank(const std::vector<std::vector<Rational>>& m_in) {
    const int rows = static_cast<int>(m_in.size());
    if (rows == 0)
        return 0;
    const int cols = static_cast<int>(m_in[0].size());
    std::vector<std::vector<mpz_class>> m(rows, std::vector<mpz_class>(cols));
    for (int i = 0; i < rows; ++i) {
        mpz_class lcm = 1;
        for (int j = 0; j < cols; ++j)
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m_in[i][j].get_den().get_mpz_t());
        for (int j = 0; j < cols; ++j) {
            Rational scaled = m_in[i][j] * Rational(lcm);
            m[i][j] = scaled.get_num();
        }
    }

    int rank = 0;
    mpz_class prev = 1;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (sgn(m[r][col]) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0)
            continue;
        std::swap(m[rank], m[pivot]);
        for (int r = rank + 1; r < rows; ++r) {
            for (int c = col + 1; c < cols; ++c) {
                mpz_class num = m[rank][col] * m[r][c] - m[r][col] * m[rank][c];
                mpz_divexact(m[r][c].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        ++rank;
    }
    return rank;
}

// Rank over doubles: singular values against a relative threshold.
inline int matrix_rank(const std::vector<std::vector<double>>& m_in) {
    const int rows = static_cast<int>(m_in.size());
    if (rows == 0)
        return 0;
    const int cols = static_cast<int>(m_in[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            m(i, j) = m_in[i][j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0)
        return 0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > float_zero_threshold * sv(0))
            ++rank;
    return rank;
}

}  // namespace detail

// Least k <= k_max such that X h, ..., X^k h vanish at 0 while
// X^{k+1} h does not, together with the gradient matrix of
// h, Xh, ..., X^k h at 0 and its rank.  k = 0 means transversal.
template <class S>
ContactReport<S> contact_order(const VectorField<S>& x, const Jet<S>& h, int k_max) {
    require_field(x);
    require_surface(h);
    if (h.nvars() != x.nvars())
        throw input_error("surface and field live in different variable counts");
    if (h.order() != x.order())
        throw input_error("order mismatch: jets must share a truncation order");
    if (k_max < 0)
        throw input_error("k_max must be nonnegative");
    const int n = h.order();
    if (k_max + 1 > n)
        throw precondition_error("jet order " + std::to_string(n) +
                                 " cannot decide contact order up to k_max = " +
                                 std::to_string(k_max));

    std::vector<Jet<S>> lie;  // lie[i] = X^i h
    lie.push_back(h);
    int k = -1;
    for (int i = 1; i <= k_max + 1; ++i) {
        lie.push_back(lie_derivative(lie.back(), x));
        if (!lie.back().negligible(lie.back().constant_term())) {
            k = i - 1;
            break;
        }
    }
    if (k < 0)
        throw precondition_error(
            "all Lie derivatives through X^" + std::to_string(k_max + 1) +
            " h vanish at the base point: contact order undecidable at jet order " +
            std::to_string(n));

    ContactReport<S> report;
    report.k = k;
    report.leading = lie[k + 1].constant_term();
    for (int i = 0; i <= k; ++i) {
        std::vector<S> row;
        row.reserve(h.nvars());
        for (int j = 0; j < h.nvars(); ++j)
            row.push_back(lie[i].linear_coeff(j));
        report.gradients.push_back(std::move(row));
    }
    report.rank = detail::matrix_rank(report.gradients);
    report.simple = (k + 1 <= h.nvars()) && (report.rank == k + 1);
    return report;
}

// Independent classification: multiplicity of the root t = 0 of the
// scalar series h(flow of X at time t, started at the base point),
// minus one.  Agrees with contact_order wherever both are defined.
template <class S>
int oracle_contact_order(const VectorField<S>& x, const Jet<S>& h) {
    require_field(x);
    require_surface(h);
    if (h.nvars() != x.nvars())
        throw input_error("surface and field live in different variable counts");
    if (h.order() != x.order())
        throw input_error("order mismatch: jets must share a truncation order");

    const Jet<S> series = compose(h, flow(x));
    for (int j = 1; j <= series.order(); ++j) {
        Exponent e(series.nvars(), 0);
        e[0] = j;
        if (!series.negligible(series.coeff(e)))
            return j - 1;
    }
    throw precondition_error(
        "h along the flow vanishes through t^" + std::to_string(series.order()) +
        ": contact order undecidable at jet order " + std::to_string(series.order()));
}

}  // namespace visnf
