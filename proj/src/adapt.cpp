#include "fracadapt/adapt.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>

#include <cmath>

#include "fracadapt/detail/nelder_mead.hpp"

namespace fracadapt {

namespace {

constexpr double kBoundaryTol = 1e-10;

struct Step {
    Eigen::VectorXd delta;
    Eigen::MatrixXd cov;
};

// theta_hat - theta_tilde = -sigma {R J}^{-1} r and variance sigma^2 {J R}^{-1}.
Step newton_block(const Eigen::MatrixXd& Ed, const Eigen::VectorXd& psi, double J, double sigma,
                  const char* block) {
    Step s;
    if (Ed.cols() == 0) {
        s.delta.resize(0);
        s.cov.resize(0, 0);
        return s;
    }
    const Eigen::MatrixXd R = Ed.transpose() * Ed;
    const Eigen::VectorXd r = Ed.transpose() * psi;
    Eigen::LLT<Eigen::MatrixXd> llt(R);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14))
        throw DesignDegenerate(std::string(block) + " derivative matrix R is singular");
    s.delta = -sigma / J * llt.solve(r);
    const Eigen::MatrixXd Rinv = llt.solve(Eigen::MatrixXd::Identity(R.rows(), R.cols()));
    s.cov = sigma * sigma / J * Rinv;
    s.cov = 0.5 * (s.cov + s.cov.transpose()).eval();
    return s;
}

struct Prepared {
    ThetaFull theta;
    double sigma = 0.0;
    Residuals res;
    ResidualDerivs der;
    Eigen::VectorXd h;
};

Prepared prepare(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionDesign& design,
                 const ModelSpec& spec, const InitialFit& init) {
    if (!(init.sigma2 > 0.0) || !std::isfinite(init.sigma2)) throw InvalidArgument("initial sigma2 must be positive");
    if (init.theta1.nu.size() != spec.p11 + spec.p12) throw InvalidArgument("initial nu does not match ARMA orders");
    if (init.theta2.size() != design.p2()) throw InvalidArgument("initial theta2 does not match the design");
    Prepared p;
    p.theta = init.theta();
    p.sigma = std::sqrt(init.sigma2);
    p.res = residuals(p.theta, y, design, spec);
    p.der = residual_derivs(p.theta, y, design, spec);
    p.h = p.res.E / p.sigma;
    if (!p.h.allFinite() || !p.der.E1.allFinite() || !p.der.E2.allFinite())
        throw EstimationFailed("non-finite residuals at the initial estimate");
    return p;
}

EstimationResult finish(const Prepared& p, const RegressionDesign& design, const InitialFit& init,
                        const Eigen::VectorXd& psi, double J) {
    if (!(J > 0.0) || !std::isfinite(J)) throw EstimationFailed("estimated information is not positive");
    const Step s1 = newton_block(p.der.E1, psi, J, p.sigma, "theta1");
    const Step s2 = newton_block(p.der.E2, psi, J, p.sigma, "theta2");

    EstimationResult out;
    out.theta1_init = init.theta1;
    out.theta2_init = init.theta2;
    out.sigma_init = p.sigma;
    const Eigen::VectorXd th1 = init.theta1.packed() + s1.delta;
    out.theta1_hat = Theta1::unpack(th1);
    out.theta2_hat = init.theta2 + s2.delta;
    out.cov1 = s1.cov;
    out.cov2 = s2.cov;
    out.J_used = J;
    if (design.p2() > 0) out.dn = dn_matrix(design.chi, init.theta1.xi, p.h.size());
    return out;
}

}  // namespace

DnMatrix dn_matrix(const std::vector<double>& chi, double xi, Eigen::Index n) {
    if (n < 2) throw InvalidArgument("dn_matrix needs n >= 2");
    DnMatrix d;
    d.diagonal.resize(static_cast<Eigen::Index>(chi.size()));
    const double nn = static_cast<double>(n);
    for (std::size_t j = 0; j < chi.size(); ++j) {
        const double a = chi[j] - xi + 0.5;
        if (a < -kBoundaryTol) throw InvalidArgument("trend exponent below xi - 1/2");
        d.diagonal(Eigen::Index(j)) = (j == 0 && std::abs(a) <= kBoundaryTol) ? std::sqrt(std::log(nn))
                                                                              : std::pow(nn, a);
    }
    return d;
}

EstimationResult one_step_adaptive(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionDesign& design,
                                   const ModelSpec& spec, const InitialFit& init, const BasisConfig& basis) {
    basis.validate();
    if (y.size() < basis.L + spec.p1() + design.p2() + 2)
        throw InvalidArgument("series too short for the requested basis and model");
    const Prepared p = prepare(y, design, spec, init);
    const ScoreFit fit = fit_score(p.h, basis);
    const Eigen::VectorXd psi = eval_score(fit, p.h);
    const double J = psi.squaredNorm() / static_cast<double>(psi.size());
    EstimationResult out = finish(p, design, init, psi, J);
    out.L_used = basis.L;
    out.method = UpdateMethod::adaptive;
    return out;
}

ParametricFamily ParametricFamily::gaussian() {
    ParametricFamily f;
    f.name = "gaussian";
    f.start = f.lower = f.upper = Eigen::VectorXd(0);
    f.log_density = [](double s, const Eigen::VectorXd&) { return -0.5 * s * s - 0.5 * std::log(2.0 * M_PI); };
    f.score = [](double s, const Eigen::VectorXd&) { return s; };
    f.dlog_dtheta = [](double, const Eigen::VectorXd&) { return Eigen::VectorXd(0); };
    return f;
}

ParametricFamily ParametricFamily::laplace() {
    ParametricFamily f;
    f.name = "laplace";
    f.start = Eigen::VectorXd::Constant(1, std::sqrt(0.5));
    f.lower = Eigen::VectorXd::Constant(1, 0.05);
    f.upper = Eigen::VectorXd::Constant(1, 20.0);
    f.log_density = [](double s, const Eigen::VectorXd& th) { return -std::abs(s) / th(0) - std::log(2.0 * th(0)); };
    f.score = [](double s, const Eigen::VectorXd& th) {
        return s == 0.0 ? 0.0 : (s > 0.0 ? 1.0 : -1.0) / th(0);
    };
    f.dlog_dtheta = [](double s, const Eigen::VectorXd& th) {
        return Eigen::VectorXd::Constant(1, -1.0 / th(0) + std::abs(s) / (th(0) * th(0)));
    };
    return f;
}

ParametricFamily ParametricFamily::student_t() {
    ParametricFamily f;
    f.name = "t";
    f.start = Eigen::VectorXd::Constant(1, 8.0);
    f.lower = Eigen::VectorXd::Constant(1, 2.1);
    f.upper = Eigen::VectorXd::Constant(1, 200.0);
    const auto logd = [](double s, double nu) {
        const double c2 = (nu - 2.0) / nu;  // unit-variance rescaling
        const double x2 = s * s / c2;
        return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * M_PI) -
               0.5 * (nu + 1.0) * std::log1p(x2 / nu) - 0.5 * std::log(c2);
    };
    f.log_density = [logd](double s, const Eigen::VectorXd& th) { return logd(s, th(0)); };
    f.score = [](double s, const Eigen::VectorXd& th) {
        const double nu = th(0);
        const double c2 = (nu - 2.0) / nu;
        return (nu + 1.0) * s / (nu * c2 + s * s);
    };
    f.dlog_dtheta = [logd](double s, const Eigen::VectorXd& th) {
        const double h = 1e-5 * std::max(1.0, th(0));
        return Eigen::VectorXd::Constant(1, (logd(s, th(0) + h) - logd(s, th(0) - h)) / (2.0 * h));
    };
    return f;
}

ParametricFamily ParametricFamily::parse(std::string_view name) {
    if (name == "gaussian") return gaussian();
    if (name == "laplace") return laplace();
    if (name == "t" || name == "student_t") return student_t();
    throw InvalidArgument("unknown parametric family '" + std::string(name) + "'");
}

EstimationResult one_step_parametric(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionDesign& design,
                                     const ModelSpec& spec, const InitialFit& init, const ParametricFamily& family) {
    if (y.size() < spec.p1() + design.p2() + 2) throw InvalidArgument("series too short for the model");
    const Prepared p = prepare(y, design, spec, init);
    const Eigen::Index n = p.h.size();

    auto neg_loglik = [&](const Eigen::VectorXd& th) {
        for (int k = 0; k < family.dim(); ++k)
            if (th(k) < family.lower(k) || th(k) > family.upper(k)) return std::numeric_limits<double>::infinity();
        double acc = 0.0;
        for (Eigen::Index t = 0; t < n; ++t) acc -= family.log_density(p.h(t), th);
        return acc;
    };
    if (!std::isfinite(neg_loglik(family.start))) throw InvalidFamily("log-density is not finite at the start value");

    Eigen::VectorXd theta3 = family.start;
    if (family.dim() == 1) {
        const auto m = boost::math::tools::brent_find_minima(
            [&](double v) { return neg_loglik(Eigen::VectorXd::Constant(1, v)); }, family.lower(0), family.upper(0), 40);
        theta3(0) = m.first;
    } else if (family.dim() > 1) {
        const auto nm = detail::nelder_mead(neg_loglik, family.start, 0.1, 1e-12, 4000);
        if (!nm.converged) throw EstimationFailed("parametric family fit did not converge");
        theta3 = nm.x;
    }
    if (!std::isfinite(neg_loglik(theta3))) throw EstimationFailed("parametric family fit failed");

    Eigen::VectorXd psi(n);
    for (Eigen::Index t = 0; t < n; ++t) psi(t) = family.score(p.h(t), theta3);
    if (!psi.allFinite()) throw InvalidFamily("score is not finite");
    const double J = psi.squaredNorm() / static_cast<double>(n);

    EstimationResult out = finish(p, design, init, psi, J);
    out.method = UpdateMethod::parametric;
    out.theta3_hat = theta3;
    if (family.dim() > 0) {
        Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(family.dim(), family.dim());
        for (Eigen::Index t = 0; t < n; ++t) {
            const Eigen::VectorXd d = family.dlog_dtheta(p.h(t), theta3);
            outer += d * d.transpose();
        }
        outer /= static_cast<double>(n);
        out.cov3 = outer.inverse() / static_cast<double>(n);
    } else {
        out.cov3.resize(0, 0);
    }
    return out;
}

WaldResult wald_test(const EstimationResult& result, const LinearRestriction& restriction, bool one_sided) {
    const bool first = restriction.block == LinearRestriction::Block::theta1;
    const Eigen::VectorXd est = first ? result.theta1_hat.packed() : result.theta2_hat;
    const Eigen::MatrixXd& cov = first ? result.cov1 : result.cov2;
    const Eigen::MatrixXd& R = restriction.R;
    if (R.cols() != est.size() || R.rows() != restriction.r.size() || R.rows() == 0)
        throw InvalidArgument("restriction dimensions do not match the parameter block");
    if (R.rows() > est.size()) throw InvalidArgument("more restrictions than parameters");
    if (one_sided && R.rows() != 1) throw InvalidArgument("one-sided Wald tests need a scalar restriction");

    const Eigen::VectorXd diff = R * est - restriction.r;
    const Eigen::MatrixXd V = R * cov * R.transpose();
    Eigen::LLT<Eigen::MatrixXd> llt(V);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14))
        throw InvalidRestriction("restricted covariance is singular");

    WaldResult w;
    w.df = static_cast<int>(R.rows());
    w.one_sided = one_sided;
    if (one_sided) {
        w.statistic = diff(0) / std::sqrt(V(0, 0));
        w.p_value = boost::math::cdf(boost::math::complement(boost::math::normal(), w.statistic));
    } else {
        w.statistic = diff.dot(llt.solve(diff));
        w.p_value = w.statistic <= 0.0
                        ? 1.0
                        : boost::math::cdf(boost::math::complement(boost::math::chi_squared(w.df), w.statistic));
    }
    return w;
}

Eigen::MatrixXd omega1(const Theta1& theta1, const ModelSpec& spec, Eigen::Index terms) {
    const Eigen::MatrixXd g = log_deriv_coeffs(theta1, spec, terms);
    return g * g.transpose();
}

Eigen::MatrixXd omega2(const std::vector<double>& chi, double xi, double sigma2, double beta_at_one) {
    const auto p2 = static_cast<Eigen::Index>(chi.size());
    Eigen::MatrixXd m(p2, p2);
    const bool boundary = p2 > 0 && std::abs(chi[0] - xi + 0.5) <= kBoundaryTol;
    for (Eigen::Index i = 0; i < p2; ++i) {
        for (Eigen::Index j = 0; j < p2; ++j) {
            const double ai = chi[i] - xi, aj = chi[j] - xi;
            if (ai < -0.5 - kBoundaryTol || aj < -0.5 - kBoundaryTol)
                throw InvalidArgument("trend exponent below xi - 1/2");
            m(i, j) = std::sqrt(2.0 * ai + 1.0) * std::sqrt(2.0 * aj + 1.0) * ai * aj /
                      ((ai + aj + 1.0) * (ai + 1.0) * (aj + 1.0));
        }
    }
    if (boundary) {
        m.row(0).setZero();
        m.col(0).setZero();
        m(0, 0) = 1.0;
    }
    return sigma2 / (2.0 * M_PI) * beta_at_one * beta_at_one * m;
}

Eigen::MatrixXd trend_gram_limit(const std::vector<double>& chi, const Theta1& theta1, const ModelSpec& spec) {
    const auto p2 = static_cast<Eigen::Index>(chi.size());
    const double xi = theta1.xi;
    // alpha(1; theta1^-) = AR(1) / MA(1)
    const double alpha1 = ar_polynomial(theta1.nu.head(spec.p11)).sum() / ma_polynomial(theta1.nu.tail(spec.p12)).sum();
    Eigen::VectorXd c(p2), a(p2);
    for (Eigen::Index i = 0; i < p2; ++i) {
        a(i) = chi[i] - xi;
        if (!(a(i) > -0.5 + kBoundaryTol)) throw InvalidArgument("trend_gram_limit needs chi_j > xi - 1/2");
        // Delta^xi t^chi ~ Gamma(chi + 1) / Gamma(chi - xi + 1) t^{chi - xi}
        c(i) = alpha1 * boost::math::tgamma_ratio(chi[i] + 1.0, chi[i] - xi + 1.0);
    }
    Eigen::MatrixXd m(p2, p2);
    for (Eigen::Index i = 0; i < p2; ++i)
        for (Eigen::Index j = 0; j < p2; ++j)
            m(i, j) = c(i) * c(j) * a(i) * a(j) / ((a(i) + a(j) + 1.0) * (a(i) + 1.0) * (a(j) + 1.0));
    return m;
}

}  // namespace fracadapt
