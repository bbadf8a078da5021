#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>

namespace fracadapt {

/// phi(s) = s (unbounded) or phi(s) = s / sqrt(1 + s^2) (bounded); basis functions are phi^l, l = 1..L.
enum class PhiKind { identity, bounded };

struct BasisConfig {
    PhiKind phi = PhiKind::identity;
    int L = 1;

    void validate() const;
    static PhiKind parse_phi(std::string_view name);  // id|identity|bounded
    static std::string phi_name(PhiKind kind);
};

double phi_value(PhiKind kind, double s);
double phi_deriv(PhiKind kind, double s);

/// Series estimate of the score psi = -g'/g from a standardized sample.
struct ScoreFit {
    Eigen::VectorXd a_hat;  // W^{-1} w
    Eigen::MatrixXd W;      // sample covariance of the centered basis
    Eigen::VectorXd w;      // sample mean of the basis derivatives
    double J_L = 0.0;       // w' W^{-1} w
    double rcond = 0.0;     // reciprocal condition estimate of W
    BasisConfig basis;
};

/// Raw basis matrix phi^{(L)}(h_t), n x L.
Eigen::MatrixXd basis_matrix(const BasisConfig& basis, const Eigen::Ref<const Eigen::VectorXd>& h);

/// Throws SingularBasis when W is not numerically positive definite
/// (reciprocal condition below 1e-14), e.g. for a constant sample.
ScoreFit fit_score(const Eigen::Ref<const Eigen::VectorXd>& h, const BasisConfig& basis);

/// psi_t = a_hat' (phi^{(L)}(h_t) - mean over the evaluation sample).
Eigen::VectorXd eval_score(const ScoreFit& fit, const Eigen::Ref<const Eigen::VectorXd>& h);

}  // namespace fracadapt
