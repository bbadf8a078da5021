#pragma once

// Truncated power-series algebra. A filter is the coefficient vector
// c_0..c_{n-1} of c(s) = sum_j c_j s^j; every fractional operator in the
// library (differencing, AR representations, derivative filters) is one.

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "fracadapt/errors.hpp"

namespace fracadapt {

template <typename Scalar>
using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using FilterCoeffs = Coeffs<double>;
using Series = Eigen::VectorXd;

namespace detail {
inline void require_count(Eigen::Index n, const char* who) {
    if (n <= 0) throw InvalidArgument(std::string(who) + ": coefficient count must be positive");
}
}  // namespace detail

/// Coefficients of (1 - s)^{-d}, i.e. Gamma(j + d) / (Gamma(d) Gamma(j + 1)).
/// Built by the ratio recurrence, so nonpositive integer d yields exact zeros
/// past lag -d. Coefficients of (1 - s)^d are delta_coeffs(-d, n).
template <typename Scalar>
Coeffs<Scalar> delta_coeffs(Scalar d, Eigen::Index n) {
    detail::require_count(n, "delta_coeffs");
    Coeffs<Scalar> c(n);
    c(0) = Scalar(1);
    for (Eigen::Index j = 1; j < n; ++j) c(j) = c(j - 1) * (Scalar(j - 1) + d) / Scalar(j);
    return c;
}

/// Coefficients of -log(1 - s) = sum_{j>=1} s^j / j.
template <typename Scalar = double>
Coeffs<Scalar> log_coeffs(Eigen::Index n) {
    detail::require_count(n, "log_coeffs");
    Coeffs<Scalar> c(n);
    c(0) = Scalar(0);
    for (Eigen::Index j = 1; j < n; ++j) c(j) = Scalar(1) / Scalar(j);
    return c;
}

/// Cauchy product truncated to n terms; entries past either input's length count as zero.
template <typename DerivedA, typename DerivedB>
Coeffs<typename DerivedA::Scalar> convolve(const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b, Eigen::Index n) {
    using Scalar = typename DerivedA::Scalar;
    detail::require_count(n, "convolve");
    if (a.size() == 0 || b.size() == 0) throw InvalidArgument("convolve: empty operand");
    Coeffs<Scalar> out = Coeffs<Scalar>::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const Eigen::Index k_lo = std::max<Eigen::Index>(0, j - (b.size() - 1));
        const Eigen::Index k_hi = std::min<Eigen::Index>(j, a.size() - 1);
        Scalar acc(0);
        for (Eigen::Index k = k_lo; k <= k_hi; ++k) acc += a(k) * b(j - k);
        out(j) = acc;
    }
    return out;
}

/// Reciprocal power series b with a(s) b(s) = 1 + O(s^n).
template <typename Derived>
Coeffs<typename Derived::Scalar> series_inverse(const Eigen::MatrixBase<Derived>& a, Eigen::Index n) {
    using Scalar = typename Derived::Scalar;
    detail::require_count(n, "series_inverse");
    if (a.size() == 0 || a(0) == Scalar(0))
        throw NonInvertibleSeries("leading coefficient is zero");
    Coeffs<Scalar> b(n);
    const Scalar inv0 = Scalar(1) / a(0);
    b(0) = inv0;
    for (Eigen::Index j = 1; j < n; ++j) {
        Scalar acc(0);
        const Eigen::Index k_hi = std::min<Eigen::Index>(j, a.size() - 1);
        for (Eigen::Index k = 1; k <= k_hi; ++k) acc += a(k) * b(j - k);
        b(j) = -inv0 * acc;
    }
    return b;
}

/// One-sided truncated filter: out_t = sum_{j=0}^{t-1} c_j x_{t-j} (1-based t).
/// Coefficients beyond c.size() are taken as zero.
template <typename DerivedC, typename DerivedX>
Coeffs<typename DerivedX::Scalar> apply_filter(const Eigen::MatrixBase<DerivedC>& c,
                                               const Eigen::MatrixBase<DerivedX>& x) {
    using Scalar = typename DerivedX::Scalar;
    const Eigen::Index n = x.size();
    if (n == 0) throw InvalidArgument("apply_filter: empty series");
    Coeffs<Scalar> out(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        const Eigen::Index taps = std::min<Eigen::Index>(t + 1, c.size());
        // c_0..c_{taps-1} against x_t, x_{t-1}, ...
        out(t) = c.head(taps).dot(x.segment(t - taps + 1, taps).reverse());
    }
    return out;
}

}  // namespace fracadapt
