#include "fracadapt/residuals.hpp"

#include <cmath>

namespace fracadapt {

namespace {

constexpr double kTieTol = 1e-10;

void check_inputs(const ThetaFull& theta, const Eigen::Ref<const Eigen::VectorXd>& y,
                  const RegressionDesign& design) {
    if (y.size() < 2) throw InvalidArgument("residuals need at least two observations");
    if (design.n() != y.size()) throw InvalidArgument("design length does not match series length");
    if (theta.theta2.size() != design.p2())
        throw InvalidArgument("theta2 has " + std::to_string(theta.theta2.size()) + " entries but design has " +
                              std::to_string(design.p2()) + " trend terms");
}

Series detrended(const ThetaFull& theta, const Eigen::Ref<const Eigen::VectorXd>& y,
                 const RegressionDesign& design) {
    if (design.p2() == 0) return y;
    return y - design.z2 * theta.theta2;
}

}  // namespace

void center_columns(Eigen::MatrixXd& m) {
    if (m.rows() == 0) return;
    m.rowwise() -= m.colwise().mean();
}

RegressionDesign regressors(const std::vector<double>& exponents, double xi, Eigen::Index n) {
    if (n <= 0) throw InvalidArgument("regressors: n must be positive");
    for (std::size_t j = 1; j < exponents.size(); ++j)
        if (!(exponents[j] > exponents[j - 1]))
            throw InvalidArgument("regression exponents must be strictly increasing");

    RegressionDesign d;
    d.exponents = exponents;
    d.xi = xi;
    const int q = static_cast<int>(exponents.size());
    for (int j = 0; j < q; ++j) {
        const double tau = exponents[j];
        if (std::abs(tau - xi) <= kTieTol) {
            d.t2.push_back(j);
        } else if (tau < xi - 0.5 - kTieTol) {
            d.t1.push_back(j);
        } else {
            d.t3.push_back(j);
            d.chi.push_back(tau);
        }
    }

    d.z.resize(n, q);
    d.z2.resize(n, d.p2());
    for (Eigen::Index t = 0; t < n; ++t) {
        const double tt = static_cast<double>(t + 1);
        for (int j = 0; j < q; ++j) d.z(t, j) = std::pow(tt, exponents[j]);
    }
    for (int k = 0; k < d.p2(); ++k) d.z2.col(k) = d.z.col(d.t3[k]);
    return d;
}

RegressionDesign no_trend(Eigen::Index n) { return regressors({}, 0.0, n); }

Residuals residuals(const ThetaFull& theta, const Eigen::Ref<const Eigen::VectorXd>& y,
                    const RegressionDesign& design, const ModelSpec& spec) {
    check_inputs(theta, y, design);
    const FilterCoeffs alpha = ar_coeffs(theta.theta1(), spec, y.size());
    Residuals out;
    out.e = apply_filter(alpha, detrended(theta, y, design));
    out.E = out.e.array() - out.e.mean();
    return out;
}

ResidualDerivs residual_derivs(const ThetaFull& theta, const Eigen::Ref<const Eigen::VectorXd>& y,
                               const RegressionDesign& design, const ModelSpec& spec) {
    check_inputs(theta, y, design);
    const Eigen::Index n = y.size();
    const Theta1 th1 = theta.theta1();
    const Eigen::MatrixXd dalpha = ar_deriv_coeffs(th1, spec, n);
    const Series x = detrended(theta, y, design);

    ResidualDerivs out;
    out.E1.resize(n, spec.p1());
    for (int i = 0; i < spec.p1(); ++i) out.E1.col(i) = apply_filter(dalpha.row(i).transpose(), x);
    center_columns(out.E1);

    out.E2.resize(n, design.p2());
    if (design.p2() > 0) {
        const FilterCoeffs alpha = ar_coeffs(th1, spec, n);
        for (int j = 0; j < design.p2(); ++j) out.E2.col(j) = -apply_filter(alpha, design.z2.col(j));
        center_columns(out.E2);
    }
    return out;
}

}  // namespace fracadapt
