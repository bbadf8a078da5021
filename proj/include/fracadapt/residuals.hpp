#pragma once

#include <Eigen/Dense>

#include <vector>

#include "fracadapt/model.hpp"

namespace fracadapt {

/// Trend exponents split by their relation to a memory value xi:
/// T1 = {tau < xi - 1/2} (unestimable), T2 = {tau == xi} (absorbed by centering),
/// T3 = the rest, whose exponents chi enter the residuals through theta2.
struct RegressionDesign {
    std::vector<double> exponents;
    double xi = 0.0;
    std::vector<int> t1, t2, t3;  // 0-based indices into exponents
    std::vector<double> chi;
    Eigen::MatrixXd z;   // n x q, columns t^{tau_j}
    Eigen::MatrixXd z2;  // n x p2, columns t^{chi_j}

    int p2() const { return static_cast<int>(chi.size()); }
    Eigen::Index n() const { return z.rows(); }
};

/// Builds the design for t = 1..n. Equality with xi (or xi - 1/2) is tested to 1e-10.
RegressionDesign regressors(const std::vector<double>& exponents, double xi, Eigen::Index n);

/// Design with no trend terms.
RegressionDesign no_trend(Eigen::Index n);

struct Residuals {
    Series e;  // truncated AR transform e_t(theta)
    Series E;  // e_t minus its sample mean
};

Residuals residuals(const ThetaFull& theta, const Eigen::Ref<const Eigen::VectorXd>& y,
                    const RegressionDesign& design, const ModelSpec& spec);

struct ResidualDerivs {
    Eigen::MatrixXd E1;  // n x p1, centered d e_t / d theta1
    Eigen::MatrixXd E2;  // n x p2, centered d e_t / d theta2
};

ResidualDerivs residual_derivs(const ThetaFull& theta, const Eigen::Ref<const Eigen::VectorXd>& y,
                               const RegressionDesign& design, const ModelSpec& spec);

/// Column-centers m in place.
void center_columns(Eigen::MatrixXd& m);

}  // namespace fracadapt
