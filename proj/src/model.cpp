#include "fracadapt/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace fracadapt {

ModelSpec ModelSpec::farima(int p, int q) {
    ModelSpec spec;
    spec.p11 = p;
    spec.p12 = q;
    spec.ar = Eigen::VectorXd::Zero(p);
    spec.ma = Eigen::VectorXd::Zero(q);
    return spec;
}

void ModelSpec::validate() const {
    if (p11 < 0 || p12 < 0) throw InvalidArgument("negative ARMA order");
    if (ar.size() != p11 || ma.size() != p12) throw InvalidArgument("ARMA coefficient count does not match orders");
    if (!roots_outside_unit_circle(-ar)) throw InvalidArgument("AR polynomial is not stationary");
    if (!roots_outside_unit_circle(ma)) throw InvalidArgument("MA polynomial is not invertible");
    for (std::size_t j = 1; j < regression_exponents.size(); ++j)
        if (!(regression_exponents[j] > regression_exponents[j - 1]))
            throw InvalidArgument("regression exponents must be strictly increasing");
}

Eigen::VectorXd Theta1::packed() const {
    Eigen::VectorXd v(1 + nu.size());
    v(0) = xi;
    v.tail(nu.size()) = nu;
    return v;
}

Theta1 Theta1::unpack(const Eigen::Ref<const Eigen::VectorXd>& v) {
    return {v(0), v.tail(v.size() - 1)};
}

void ThetaFull::validate(const ModelSpec& spec) const {
    check_memory(xi);
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw InvalidArgument("sigma2 must be positive and finite");
    if (nu.size() != spec.p11 + spec.p12) throw InvalidArgument("nu length does not match ARMA orders");
    if (!roots_outside_unit_circle(-nu.head(spec.p11)))
        throw InvalidArgument("AR part of nu is not stationary");
    if (!roots_outside_unit_circle(nu.tail(spec.p12)))
        throw InvalidArgument("MA part of nu is not invertible");
}

void check_memory(double xi) {
    if (!std::isfinite(xi) || !(xi > -0.5)) throw InvalidArgument("memory parameter must exceed -1/2");
    const double frac = xi - std::floor(xi);
    if (std::abs(frac - 0.5) <= 1e-8)
        throw InvalidArgument("memory parameter may not be a half-integer");
}

MemorySplit split_memory(double xi) {
    check_memory(xi);
    const int m = std::max(0, static_cast<int>(std::floor(xi + 0.5)));
    return {m, xi - m};
}

bool roots_outside_unit_circle(const Eigen::Ref<const Eigen::VectorXd>& tail) {
    // Trim trailing zeros so the companion matrix is well defined.
    Eigen::Index k = tail.size();
    while (k > 0 && tail(k - 1) == 0.0) --k;
    if (k == 0) return true;
    // Roots of 1 + c_1 s + ... + c_k s^k lie outside the unit circle iff the
    // roots of z^k + c_1 z^{k-1} + ... + c_k lie strictly inside it.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
    companion.row(0) = -tail.head(k).transpose();
    if (k > 1) companion.bottomLeftCorner(k - 1, k - 1).setIdentity();
    const Eigen::VectorXcd eig = companion.eigenvalues();
    return eig.cwiseAbs().maxCoeff() < 1.0;
}

Eigen::VectorXd ar_polynomial(const Eigen::Ref<const Eigen::VectorXd>& ar) {
    Eigen::VectorXd p(1 + ar.size());
    p(0) = 1.0;
    p.tail(ar.size()) = -ar;
    return p;
}

Eigen::VectorXd ma_polynomial(const Eigen::Ref<const Eigen::VectorXd>& ma) {
    Eigen::VectorXd p(1 + ma.size());
    p(0) = 1.0;
    p.tail(ma.size()) = ma;
    return p;
}

namespace {

struct ShortMemory {
    Eigen::VectorXd ar_poly;
    Eigen::VectorXd ma_poly;
};

ShortMemory short_memory(const Theta1& theta1, const ModelSpec& spec) {
    if (theta1.nu.size() != spec.p11 + spec.p12)
        throw InvalidArgument("nu length does not match ARMA orders");
    return {ar_polynomial(theta1.nu.head(spec.p11)), ma_polynomial(theta1.nu.tail(spec.p12))};
}

FilterCoeffs shift(const FilterCoeffs& c, Eigen::Index k) {
    FilterCoeffs out = FilterCoeffs::Zero(c.size());
    if (k < c.size()) out.tail(c.size() - k) = c.head(c.size() - k);
    return out;
}

}  // namespace

FilterCoeffs ar_coeffs(const Theta1& theta1, const ModelSpec& spec, Eigen::Index n) {
    const auto sm = short_memory(theta1, spec);
    const FilterCoeffs frac = delta_coeffs(-theta1.xi, n);
    const FilterCoeffs inv_ma = series_inverse(sm.ma_poly, n);
    return convolve(convolve(frac, sm.ar_poly, n), inv_ma, n);
}

Eigen::MatrixXd ar_deriv_coeffs(const Theta1& theta1, const ModelSpec& spec, Eigen::Index n) {
    const auto sm = short_memory(theta1, spec);
    const FilterCoeffs frac = delta_coeffs(-theta1.xi, n);
    const FilterCoeffs inv_ma = series_inverse(sm.ma_poly, n);
    const FilterCoeffs alpha = convolve(convolve(frac, sm.ar_poly, n), inv_ma, n);

    Eigen::MatrixXd rows(spec.p1(), n);
    rows.row(0) = convolve(alpha, -log_coeffs(n), n).transpose();

    // d/da_k: -s^k (1 - s)^xi / MA(s)
    const FilterCoeffs frac_over_ma = convolve(frac, inv_ma, n);
    for (int k = 1; k <= spec.p11; ++k) rows.row(k) = -shift(frac_over_ma, k).transpose();

    // d/db_k: -s^k (1 - s)^xi AR(s) / MA(s)^2
    const FilterCoeffs alpha_over_ma = convolve(alpha, inv_ma, n);
    for (int k = 1; k <= spec.p12; ++k) rows.row(spec.p11 + k) = -shift(alpha_over_ma, k).transpose();
    return rows;
}

Eigen::MatrixXd log_deriv_coeffs(const Theta1& theta1, const ModelSpec& spec, Eigen::Index n) {
    const auto sm = short_memory(theta1, spec);
    const FilterCoeffs inv_ar = series_inverse(sm.ar_poly, n);
    const FilterCoeffs inv_ma = series_inverse(sm.ma_poly, n);
    Eigen::MatrixXd rows(spec.p1(), n);
    rows.row(0) = -log_coeffs(n).transpose();
    for (int k = 1; k <= spec.p11; ++k) rows.row(k) = -shift(inv_ar, k).transpose();
    for (int k = 1; k <= spec.p12; ++k) rows.row(spec.p11 + k) = -shift(inv_ma, k).transpose();
    return rows;
}

Series simulate(const ThetaFull& theta, const ModelSpec& spec, Eigen::Index n,
                const Eigen::Ref<const Eigen::VectorXd>& eps, Eigen::Index burn_in) {
    if (n <= 0) throw InvalidArgument("simulate: n must be positive");
    if (burn_in < 0) throw InvalidArgument("simulate: negative burn-in");
    if (eps.size() < n + burn_in) throw InvalidArgument("simulate: innovation series shorter than n + burn_in");
    theta.validate(spec);

    const MemorySplit split = split_memory(theta.xi);
    const Eigen::Index total = n + burn_in;
    const double sigma = std::sqrt(theta.sigma2);
    const Eigen::VectorXd ar = theta.nu.head(spec.p11);
    const Eigen::VectorXd ma = theta.nu.tail(spec.p12);

    Eigen::VectorXd u(total);
    for (Eigen::Index t = 0; t < total; ++t) {
        double acc = eps(t);
        for (int k = 1; k <= spec.p12 && k <= t; ++k) acc += ma(k - 1) * eps(t - k);
        acc *= sigma;
        for (int k = 1; k <= spec.p11 && k <= t; ++k) acc += ar(k - 1) * u(t - k);
        u(t) = acc;
    }

    const FilterCoeffs frac = delta_coeffs(split.zeta, total);
    Series x(n);
    for (Eigen::Index t = 0; t < n; ++t) {
        const Eigen::Index taps = burn_in + t + 1;
        x(t) = frac.head(taps).dot(u.head(taps).reverse());
    }
    for (int k = 0; k < split.m; ++k)
        for (Eigen::Index t = 1; t < n; ++t) x(t) += x(t - 1);
    return x;
}

double acf_farima0d0(double d, double sigma2, int k) {
    if (!(std::abs(d) < 0.5)) throw InvalidArgument("acf_farima0d0 requires |d| < 1/2");
    if (k < 0) k = -k;
    const double g1 = std::tgamma(1.0 - d);
    double gamma = sigma2 * std::tgamma(1.0 - 2.0 * d) / (g1 * g1);
    for (int j = 1; j <= k; ++j) gamma *= (j - 1 + d) / (j - d);
    return gamma;
}

}  // namespace fracadapt
