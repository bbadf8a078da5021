#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fracadapt/errors.hpp"
#include "fracadapt//innovations.hpp"
#include "fracadapt/residuals.hpp"
#include "fracadapt/rng.hpp"

using namespace fracadapt;

namespace {

ThetaFull theta(double xi, Eigen::VectorXd theta2 = {}, Eigen::VectorXd nu = {}) {
    return {xi, std::move(nu), std::move(theta2), 1.0};
}

Eigen::VectorXd normals(std::uint64_t seed, Eigen::Index n) {
    Engine rng = make_stream(seed, {});
    return sample(InnovationDist{}, n, rng);
}

}  // namespace

TEST(Regressors, LinearTrendColumn) {
    const RegressionDesign d = regressors({1.0}, 0.0, 3);
    EXPECT_EQ(Eigen::VectorXd(d.z.col(0)), Eigen::Vector3d(1, 2, 3));
    EXPECT_EQ(d.p2(), 1);
    EXPECT_EQ(Eigen::VectorXd(d.z2.col(0)), Eigen::Vector3d(1, 2, 3));
}

TEST(Regressors, Classification) {
    const RegressionDesign d = regressors({-1.0, 0.25, 1.0}, 0.25, 10);
    EXPECT_EQ(d.t1, std::vector<int>{0});
    EXPECT_EQ(d.t2, std::vector<int>{1});
    EXPECT_EQ(d.t3, std::vector<int>{2});
    EXPECT_EQ(d.chi, std::vector<double>{1.0});
}

TEST(Regressors, BoundaryExponentIsEstimable) {
    const RegressionDesign d = regressors({-0.25}, 0.25, 10);
    EXPECT_TRUE(d.t1.empty());
    EXPECT_EQ(d.t3, std::vector<int>{0});
}

TEST(Regressors, PartitionAndOrderingProperty) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> tau(4);
        for (auto& t : tau) t = std::round(u(rng) * 4) / 4;
        std::sort(tau.begin(), tau.end());
        tau.erase(std::unique(tau.begin(), tau.end()), tau.end());
        const double xi = std::round(u(rng) * 4) / 4 + 0.001 * (trial % 2);
        const RegressionDesign d = regressors(tau, xi, 5);
        EXPECT_EQ(d.t1.size() + d.t2.size() + d.t3.size(), tau.size());
        for (std::size_t j = 1; j < d.chi.size(); ++j) EXPECT_LT(d.chi[j - 1], d.chi[j]);
        if (!d.chi.empty()) EXPECT_GE(d.chi.front(), xi - 0.5 - 1e-10);
    }
}

TEST(Regressors, RejectsNonincreasingExponents) {
    EXPECT_THROW(regressors({1.0, 1.0}, 0.0, 5), InvalidArgument);
    EXPECT_THROW(regressors({2.0, 1.0}, 0.0, 5), InvalidArgument);
}

TEST(Residuals, DifferencedLine) {
    const Eigen::Vector3d y(1, 2, 3);
    const Residuals r = residuals(theta(1.0), y, no_trend(3), ModelSpec::farima(0, 0));
    EXPECT_EQ(r.e, Eigen::Vector3d(1, 1, 1));
    EXPECT_EQ(r.E, Eigen::Vector3d::Zero());
}

TEST(Residuals, IdentityFilter) {
    const Eigen::VectorXd y = normals(1, 20);
    const Residuals r = residuals(theta(0.0), y, no_trend(20), ModelSpec::farima(0, 0));
    EXPECT_EQ(r.e, y);
    EXPECT_NEAR(r.E.sum(), 0.0, 1e-12);
}

TEST(Residuals, TrendCancelsBeforeFiltering) {
    const Eigen::Index n = 30;
    const Eigen::VectorXd eps = normals(2, n);
    const RegressionDesign d = regressors({1.0}, 0.0, n);
    const Eigen::VectorXd y = 2.0 * d.z2.col(0) + eps;
    const Residuals r = residuals(theta(0.0, Eigen::VectorXd::Constant(1, 2.0)), y, d, ModelSpec::farima(0, 0));
    EXPECT_LT((r.e - eps).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Residuals, DimensionMismatch) {
    const RegressionDesign d = regressors({1.0}, 0.0, 10);
    EXPECT_THROW(residuals(theta(0.0), Eigen::VectorXd::Ones(10), d, ModelSpec::farima(0, 0)), InvalidArgument);
    EXPECT_THROW(residuals(theta(0.0), Eigen::VectorXd::Ones(1), no_trend(1), ModelSpec::farima(0, 0)),
                 InvalidArgument);
}

TEST(Residuals, RecoverInnovationsWithoutTruncationError) {
    const Eigen::Index n = 200;
    const Eigen::VectorXd eps = normals(3, n);
    const ModelSpec spec = ModelSpec::farima(0, 0);
    const ThetaFull th{0.0, Eigen::VectorXd(0), Eigen::VectorXd(0), 2.25};
    const Series x = simulate(th, spec, n, eps, 0);
    const Residuals r = residuals(th, x, no_trend(n), spec);
    EXPECT_LT((r.e - 1.5 * eps).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Residuals, IntegerMemoryAnnihilatesConstants) {
    // Truncation leaves the constant visible in the first xi residuals only.
    const Eigen::Index n = 60;
    const Eigen::VectorXd y = normals(4, n);
    for (int m : {1, 2}) {
        const Residuals a = residuals(theta(m), y, no_trend(n), ModelSpec::farima(0, 0));
        const Residuals b = residuals(theta(m), (y.array() + 7.5).matrix(), no_trend(n), ModelSpec::farima(0, 0));
        EXPECT_LT((a.e - b.e).tail(n - m).cwiseAbs().maxCoeff(), 1e-12) << m;
        EXPECT_GT(std::abs(a.e(0) - b.e(0)), 1.0);
    }
}

TEST(ResidualDerivs, IdentityTrendColumns) {
    const Eigen::Index n = 12;
    const RegressionDesign d = regressors({0.5, 1.0}, 0.0, n);
    const ResidualDerivs g = residual_derivs(theta(0.0, Eigen::Vector2d(0.3, -0.1)), normals(5, n), d,
                                             ModelSpec::farima(0, 0));
    for (int j = 0; j < 2; ++j) {
        const Eigen::VectorXd want = -(d.z2.col(j).array() - d.z2.col(j).mean()).matrix();
        EXPECT_LT((g.E2.col(j) - want).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(ResidualDerivs, ColumnsAreCentered) {
    const Eigen::Index n = 80;
    ModelSpec spec = ModelSpec::farima(1, 1);
    const RegressionDesign d = regressors({0.5, 1.0}, 0.4, n);
    const ResidualDerivs g = residual_derivs(
        theta(0.4, Eigen::Vector2d(0.3, -0.1), Eigen::Vector2d(0.3, 0.2)), normals(6, n), d, spec);
    EXPECT_LT(g.E1.colwise().sum().cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT(g.E2.colwise().sum().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ResidualDerivs, MatchFiniteDifferences) {
    const Eigen::Index n = 128;
    ModelSpec spec = ModelSpec::farima(1, 1);
    spec.regression_exponents = {1.0};
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    const ThetaFull truth{0.35, Eigen::Vector2d(0.4, 0.2), Eigen::VectorXd::Constant(1, 0.5), 1.0};
    const RegressionDesign d = regressors({1.0}, truth.xi, n);
    const Eigen::VectorXd eps = normals(7, n + 1000);
    const Eigen::VectorXd y = simulate(truth, spec, n, eps, 1000) + truth.theta2(0) * d.z2.col(0);

    for (int trial = 0; trial < 20; ++trial) {
        ThetaFull th = truth;
        th.xi += u(rng);
        th.nu(0) += u(rng);
        th.nu(1) += u(rng);
        th.theta2(0) += u(rng);
        const ResidualDerivs g = residual_derivs(th, y, d, spec);
        const Series E0 = residuals(th, y, d, spec).E;
        const double h = 1e-6;
        for (int k = 0; k < 4; ++k) {
            ThetaFull up = th, dn = th;
            auto bump = [&](ThetaFull& t, double s) {
                if (k == 0) t.xi += s;
                else if (k < 3) t.nu(k - 1) += s;
                else t.theta2(0) += s;
            };
            bump(up, h);
            bump(dn, -h);
            const Eigen::VectorXd fd = (residuals(up, y, d, spec).E - residuals(dn, y, d, spec).E) / (2 * h);
            const Eigen::VectorXd an = k < 3 ? Eigen::VectorXd(g.E1.col(k)) : Eigen::VectorXd(g.E2.col(0));
            for (Eigen::Index t = 0; t < n; ++t)
                EXPECT_LE(std::abs(an(t) - fd(t)), 1e-4 * (1 + std::abs(E0(t)))) << "param " << k << " t " << t;
        }
    }
}
