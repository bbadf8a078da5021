#pragma once

#include <Eigen/Dense>

#include <vector>

#include "fracadapt/fracfilter.hpp"

namespace fracadapt {

/// FARIMA(p11, xi, p12) structure plus generalized-polynomial trend exponents.
/// AR polynomial 1 - a_1 s - ... - a_p s^p, MA polynomial 1 + b_1 s + ... + b_q s^q.
struct ModelSpec {
    int p11 = 0;
    int p12 = 0;
    Eigen::VectorXd ar;
    Eigen::VectorXd ma;
    std::vector<double> regression_exponents;

    static ModelSpec farima(int p, int q);

    /// p1 = 1 + p11 + p12, the length of theta1 = (xi, nu).
    int p1() const { return 1 + p11 + p12; }
    /// Throws InvalidArgument when the orders, stationarity/invertibility or exponent ordering fail.
    void validate() const;
};

/// Short-memory parameter vector nu = (ar, ma) together with xi.
struct Theta1 {
    double xi = 0.0;
    Eigen::VectorXd nu;

    Eigen::VectorXd packed() const;
    static Theta1 unpack(const Eigen::Ref<const Eigen::VectorXd>& v);
};

struct ThetaFull {
    double xi = 0.0;
    Eigen::VectorXd nu;
    Eigen::VectorXd theta2;
    double sigma2 = 1.0;

    Theta1 theta1() const { return {xi, nu}; }
    void validate(const ModelSpec& spec) const;
};

/// xi = m + zeta with m >= 0 an integer and zeta in (-1/2, 1/2).
struct MemorySplit {
    int m = 0;
    double zeta = 0.0;
};

MemorySplit split_memory(double xi);

/// Throws unless xi > -1/2 and xi stays 1e-8 clear of every half-integer.
void check_memory(double xi);

/// True when every root of 1 + c_1 s + ... + c_k s^k lies strictly outside the unit circle.
bool roots_outside_unit_circle(const Eigen::Ref<const Eigen::VectorXd>& tail);

/// AR polynomial coefficients [1, -a_1, ..., -a_p].
Eigen::VectorXd ar_polynomial(const Eigen::Ref<const Eigen::VectorXd>& ar);
/// MA polynomial coefficients [1, b_1, ..., b_q].
Eigen::VectorXd ma_polynomial(const Eigen::Ref<const Eigen::VectorXd>& ma);

/// Coefficients alpha_j(theta1) of (1 - s)^xi AR(s) / MA(s); alpha_0 = 1.
FilterCoeffs ar_coeffs(const Theta1& theta1, const ModelSpec& spec, Eigen::Index n);

/// Derivative filters d alpha(s; theta1) / d theta1, one row per component of theta1
/// (xi first, then AR, then MA). Result is p1 x n.
Eigen::MatrixXd ar_deriv_coeffs(const Theta1& theta1, const ModelSpec& spec, Eigen::Index n);

/// Coefficients of gamma(s; nu) = [log(1 - s), d log alpha(s; theta1^-) / d nu], p1 x n.
Eigen::MatrixXd log_deriv_coeffs(const Theta1& theta1, const ModelSpec& spec, Eigen::Index n);

/// Type-II FARIMA path x_1..x_n driven by eps (length n + burn_in); the first
/// burn_in innovations only feed the stationary input.
Series simulate(const ThetaFull& theta, const ModelSpec& spec, Eigen::Index n,
                const Eigen::Ref<const Eigen::VectorXd>& eps, Eigen::Index burn_in);

/// Autocovariance at lag k of a stationary FARIMA(0, d, 0) with innovation variance sigma2.
double acf_farima0d0(double d, double sigma2, int k);

}  // namespace fracadapt
