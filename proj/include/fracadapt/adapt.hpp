#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fracadapt/initial.hpp"
#include "fracadapt/model.hpp"
#include "fracadapt/residuals.hpp"
#include "fracadapt/score.hpp"

namespace fracadapt {

/// Trend-coefficient rates n^{chi_j - xi + 1/2}; the first entry becomes
/// (log n)^{1/2} when chi_1 sits on the boundary xi - 1/2.
struct DnMatrix {
    Eigen::VectorXd diagonal;
};

DnMatrix dn_matrix(const std::vector<double>& chi, double xi, Eigen::Index n);

enum class UpdateMethod { adaptive, parametric };

struct EstimationResult {
    Theta1 theta1_init;
    Eigen::VectorXd theta2_init;
    double sigma_init = 0.0;

    Theta1 theta1_hat;
    Eigen::VectorXd theta2_hat;
    /// Variance matrices of the estimates themselves, already divided by n (resp. scaled by D_n).
    Eigen::MatrixXd cov1;
    Eigen::MatrixXd cov2;
    DnMatrix dn;
    double J_used = 0.0;
    int L_used = 0;
    UpdateMethod method = UpdateMethod::adaptive;

    // parametric update only
    Eigen::VectorXd theta3_hat;
    Eigen::MatrixXd cov3;
};

/// One Newton step from the initial fit using the series score estimate:
///   theta_i = theta~_i - sigma~ {R_i J_L}^{-1} r_{Li},
/// with r_{Li} = sum_t psi~_t E'_{ti}, R_i = sum_t E'_{ti} E'_{ti}^T, J_L = mean psi~_t^2.
EstimationResult one_step_adaptive(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionDesign& design,
                                   const ModelSpec& spec, const InitialFit& init, const BasisConfig& basis);

/// Innovation density g(s; theta3) of a prescribed form.
struct ParametricFamily {
    std::string name;
    Eigen::VectorXd start;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    std::function<double(double, const Eigen::VectorXd&)> log_density;
    std::function<double(double, const Eigen::VectorXd&)> score;  // -d/ds log g
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> dlog_dtheta;

    int dim() const { return static_cast<int>(start.size()); }

    /// Standard normal; no free parameter.
    static ParametricFamily gaussian();
    /// Laplace with scale b: g = exp(-|s| / b) / (2 b).
    static ParametricFamily laplace();
    /// Student t rescaled to unit variance, free degrees of freedom.
    static ParametricFamily student_t();
    static ParametricFamily parse(std::string_view name);  // gaussian|laplace|t
};

/// Same step as the adaptive update, with psi taken from the fitted family at
/// theta3 = argmax sum_t log g(E_t(theta~) / sigma~; theta3).
EstimationResult one_step_parametric(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionDesign& design,
                                     const ModelSpec& spec, const InitialFit& init, const ParametricFamily& family);

struct LinearRestriction {
    enum class Block { theta1, theta2 };
    Block block = Block::theta1;
    Eigen::MatrixXd R;  // k x p
    Eigen::VectorXd r;  // k
};

struct WaldResult {
    double statistic = 0.0;  // quadratic form, or signed root when one-sided
    double p_value = 1.0;
    int df = 0;
    bool one_sided = false;
};

/// H0: R theta = r. One-sided (scalar only) tests against R theta > r with the
/// signed root and a standard normal reference.
WaldResult wald_test(const EstimationResult& result, const LinearRestriction& restriction, bool one_sided = false);

/// Sum over j of gamma_j gamma_j^T for the coefficients of gamma(s; nu); the
/// inverse is the efficient-Gaussian asymptotic variance of theta1.
Eigen::MatrixXd omega1(const Theta1& theta1, const ModelSpec& spec, Eigen::Index terms = 200000);

/// Trend information matrix in the closed form with Cauchy-type core
/// ((chi_i + chi_j - 2 xi + 1)^{-1}); boundary chi_1 = xi - 1/2 uses a unit (1,1) entry.
Eigen::MatrixXd omega2(const std::vector<double>& chi, double xi, double sigma2, double beta_at_one);

/// Limit of D_n^{-1} R_2 D_n^{-1} for chi_1 > xi - 1/2, from the power-law
/// asymptotics of the fractionally differenced regressors.
Eigen::MatrixXd trend_gram_limit(const std::vector<double>& chi, const Theta1& theta1, const ModelSpec& spec);

}  // namespace fracadapt
