#include "fracadapt/score.hpp"

#include <cmath>

#include "fracadapt/errors.hpp"

namespace fracadapt {

void BasisConfig::validate() const {
    if (L < 1) throw InvalidArgument("basis size L must be at least 1");
}

PhiKind BasisConfig::parse_phi(std::string_view name) {
    if (name == "id" || name == "identity") return PhiKind::identity;
    if (name == "bounded") return PhiKind::bounded;
    throw InvalidArgument("unknown phi '" + std::string(name) + "'");
}

std::string BasisConfig::phi_name(PhiKind kind) { return kind == PhiKind::identity ? "id" : "bounded"; }

double phi_value(PhiKind kind, double s) {
    return kind == PhiKind::identity ? s : s / std::sqrt(1.0 + s * s);
}

double phi_deriv(PhiKind kind, double s) {
    if (kind == PhiKind::identity) return 1.0;
    const double r = 1.0 + s * s;
    return 1.0 / (r * std::sqrt(r));
}

Eigen::MatrixXd basis_matrix(const BasisConfig& basis, const Eigen::Ref<const Eigen::VectorXd>& h) {
    Eigen::MatrixXd P(h.size(), basis.L);
    for (Eigen::Index t = 0; t < h.size(); ++t) {
        const double p = phi_value(basis.phi, h(t));
        double pw = p;
        for (int l = 0; l < basis.L; ++l) {
            P(t, l) = pw;
            pw *= p;
        }
    }
    return P;
}

ScoreFit fit_score(const Eigen::Ref<const Eigen::VectorXd>& h, const BasisConfig& basis) {
    basis.validate();
    const Eigen::Index n = h.size();
    if (n < basis.L + 2) throw InvalidArgument("score fit needs at least L + 2 observations");
    if (!h.allFinite()) throw InvalidArgument("score fit sample contains non-finite values");

    Eigen::MatrixXd Phi = basis_matrix(basis, h);
    Phi.rowwise() -= Phi.colwise().mean();

    // phi_l'(s) = l phi'(s) phi(s)^{l-1}
    Eigen::VectorXd w = Eigen::VectorXd::Zero(basis.L);
    for (Eigen::Index t = 0; t < n; ++t) {
        const double p = phi_value(basis.phi, h(t));
        const double dp = phi_deriv(basis.phi, h(t));
        double pw = 1.0;
        for (int l = 0; l < basis.L; ++l) {
            w(l) += (l + 1) * dp * pw;
            pw *= p;
        }
    }
    w /= static_cast<double>(n);

    ScoreFit fit;
    fit.basis = basis;
    fit.W = (Phi.transpose() * Phi) / static_cast<double>(n);
    fit.w = w;

    Eigen::LLT<Eigen::MatrixXd> llt(fit.W);
    fit.rcond = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
    if (llt.info() != Eigen::Success || !(fit.rcond >= 1e-14))
        throw SingularBasis(basis.L, "basis covariance is numerically singular");
    fit.a_hat = llt.solve(w);
    fit.J_L = w.dot(fit.a_hat);
    return fit;
}

Eigen::VectorXd eval_score(const ScoreFit& fit, const Eigen::Ref<const Eigen::VectorXd>& h) {
    Eigen::MatrixXd Phi = basis_matrix(fit.basis, h);
    Phi.rowwise() -= Phi.colwise().mean();
    return Phi * fit.a_hat;
}

}  // namespace fracadapt
