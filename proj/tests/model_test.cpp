#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fracadapt/errors.hpp"
#include "fracadapt//innovations.hpp"
#include "fracadapt/model.hpp"
#include "fracadapt/rng.hpp"

using namespace fracadapt;

namespace {

ModelSpec arma(std::initializer_list<double> ar, std::initializer_list<double> ma) {
    ModelSpec s = ModelSpec::farima(int(ar.size()), int(ma.size()));
    int i = 0;
    for (double a : ar) s.ar(i++) = a;
    i = 0;
    for (double b : ma) s.ma(i++) = b;
    return s;
}

Eigen::VectorXd nu_of(const ModelSpec& s) {
    Eigen::VectorXd nu(s.p11 + s.p12);
    nu << s.ar, s.ma;
    return nu;
}

Eigen::VectorXd normals(std::uint64_t seed, Eigen::Index n) {
    Engine rng = make_stream(seed, {});
    return sample(InnovationDist{}, n, rng);
}

}  // namespace

TEST(ArCoeffs, PureFractional) {
    const ModelSpec spec = ModelSpec::farima(0, 0);
    const FilterCoeffs a = ar_coeffs({0.3, Eigen::VectorXd(0)}, spec, 20);
    EXPECT_EQ(a, delta_coeffs(-0.3, 20));
}

TEST(ArCoeffs, ShortMemoryOnly) {
    const ModelSpec spec = arma({0.5}, {});
    const FilterCoeffs a = ar_coeffs({0.0, nu_of(spec)}, spec, 5);
    EXPECT_EQ(a, (Eigen::VectorXd(5) << 1, -0.5, 0, 0, 0).finished());
}

TEST(ArCoeffs, FractionalWithMaMatchesConvolutionOracle) {
    const ModelSpec spec = arma({}, {0.5});
    const FilterCoeffs a = ar_coeffs({0.4, nu_of(spec)}, spec, 6);
    const FilterCoeffs d = delta_coeffs(-0.4, 6);
    for (int j = 0; j < 6; ++j) {
        double want = 0.0;
        for (int k = 0; k <= j; ++k) want += d(k) * std::pow(-0.5, j - k);
        EXPECT_NEAR(a(j), want, 1e-14) << j;
    }
    EXPECT_EQ(a(0), 1.0);
}

TEST(ArCoeffs, InverseFilterIdentity) {
    // alpha(s; theta1) * (1-s)^{-xi} MA(s) / AR(s) = 1
    const std::vector<ModelSpec> specs{ModelSpec::farima(0, 0), arma({0.6}, {}), arma({}, {-0.4}),
                                       arma({0.5, -0.2}, {0.3})};
    for (const auto& spec : specs) {
        for (double xi : {-0.3, 0.25, 0.8, 1.3}) {
            const Eigen::Index n = 4096;
            const FilterCoeffs alpha = ar_coeffs({xi, nu_of(spec)}, spec, n);
            const FilterCoeffs pi_coeffs =
                convolve(convolve(delta_coeffs(xi, n), ma_polynomial(spec.ma), n), series_inverse(ar_polynomial(spec.ar), n), n);
            const FilterCoeffs unit = convolve(alpha, pi_coeffs, n);
            EXPECT_NEAR(unit(0), 1.0, 1e-12);
            EXPECT_LE(unit.tail(n - 1).cwiseAbs().maxCoeff(), 1e-10) << "xi=" << xi;
        }
    }
}

TEST(ArDerivCoeffs, XiRowIsLogSeries) {
    const ModelSpec spec = ModelSpec::farima(0, 0);
    const Eigen::MatrixXd d = ar_deriv_coeffs({0.0, Eigen::VectorXd(0)}, spec, 4);
    ASSERT_EQ(d.rows(), 1);
    EXPECT_NEAR(d(0, 0), 0.0, 1e-15);
    EXPECT_NEAR(d(0, 1), -1.0, 1e-15);
    EXPECT_NEAR(d(0, 2), -0.5, 1e-15);
    EXPECT_NEAR(d(0, 3), -1.0 / 3.0, 1e-15);
}

TEST(ArDerivCoeffs, ArRowIsMinusShift) {
    const ModelSpec spec = arma({0.7}, {});
    const Eigen::MatrixXd d = ar_deriv_coeffs({0.0, nu_of(spec)}, spec, 4);
    EXPECT_EQ(Eigen::RowVectorXd(d.row(1)), (Eigen::RowVectorXd(4) << 0, -1, 0, 0).finished());
}

TEST(ArDerivCoeffs, MatchesFiniteDifferences) {
    const std::vector<ModelSpec> specs{ModelSpec::farima(0, 0), arma({0.6}, {}), arma({}, {-0.4}),
                                       arma({0.5, -0.2}, {0.3, 0.1})};
    const Eigen::Index n = 60;
    for (const auto& spec : specs) {
        for (double xi : {-0.2, 0.35, 1.2}) {
            const Theta1 th{xi, nu_of(spec)};
            const Eigen::MatrixXd d = ar_deriv_coeffs(th, spec, n);
            ASSERT_EQ(d.rows(), spec.p1());
            for (int k = 0; k < spec.p1(); ++k) {
                const double h = 1e-6;
                Eigen::VectorXd up = th.packed(), dn = th.packed();
                up(k) += h;
                dn(k) -= h;
                const FilterCoeffs fd =
                    (ar_coeffs(Theta1::unpack(up), spec, n) - ar_coeffs(Theta1::unpack(dn), spec, n)) / (2 * h);
                for (Eigen::Index j = 0; j < n; ++j)
                    EXPECT_LE(std::abs(d(k, j) - fd(j)), 1e-5 * std::max(1e-3, std::abs(fd(j))))
                        << "row " << k << " j " << j << " xi " << xi;
            }
        }
    }
}

TEST(ModelSpec, RootConditions) {
    EXPECT_NO_THROW(arma({0.5, 0.3}, {0.4}).validate());
    EXPECT_THROW(arma({1.2}, {}).validate(), InvalidArgument);
    EXPECT_THROW(arma({}, {-1.0}).validate(), InvalidArgument);
    ModelSpec bad = ModelSpec::farima(0, 0);
    bad.regression_exponents = {1.0, 0.5};
    EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(ThetaFull, MemoryAdmissibility) {
    EXPECT_THROW(check_memory(-0.5), InvalidArgument);
    EXPECT_THROW(check_memory(0.5), InvalidArgument);
    EXPECT_THROW(check_memory(1.5 + 1e-9), InvalidArgument);
    EXPECT_NO_THROW(check_memory(1.5 + 1e-6));
    EXPECT_NO_THROW(check_memory(-0.49));
    const ThetaFull th{0.2, Eigen::VectorXd(0), Eigen::VectorXd(0), 0.0};
    EXPECT_THROW(th.validate(ModelSpec::farima(0, 0)), InvalidArgument);
}

TEST(SplitMemory, IntegerPartAndRemainder) {
    EXPECT_EQ(split_memory(-0.25).m, 0);
    EXPECT_EQ(split_memory(0.25).m, 0);
    EXPECT_EQ(split_memory(0.75).m, 1);
    EXPECT_NEAR(split_memory(0.75).zeta, -0.25, 1e-15);
    EXPECT_EQ(split_memory(1.25).m, 1);
    EXPECT_EQ(split_memory(2.4).m, 2);
}

TEST(Simulate, WhiteNoiseIsScaledInnovation) {
    const Eigen::VectorXd eps = normals(1, 50);
    const ThetaFull th{0.0, Eigen::VectorXd(0), Eigen::VectorXd(0), 4.0};
    const Series x = simulate(th, ModelSpec::farima(0, 0), 50, eps, 0);
    EXPECT_LT((x - 2.0 * eps).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Simulate, UnitRootIsRandomWalk) {
    const Eigen::VectorXd eps = normals(2, 40);
    const ThetaFull th{1.0, Eigen::VectorXd(0), Eigen::VectorXd(0), 1.0};
    const Series x = simulate(th, ModelSpec::farima(0, 0), 40, eps, 0);
    double acc = 0.0;
    for (int t = 0; t < 40; ++t) {
        acc += eps(t);
        EXPECT_NEAR(x(t), acc, 1e-12);
    }
}

TEST(Simulate, IntegerShiftIsCumulativeSum) {
    const ModelSpec spec = arma({0.4}, {0.2});
    const Eigen::VectorXd eps = normals(3, 300 + 200);
    for (double xi : {-0.3, 0.2, 0.7}) {
        const ThetaFull a{xi, nu_of(spec), Eigen::VectorXd(0), 1.5};
        ThetaFull b = a;
        b.xi += 1.0;
        const Series xa = simulate(a, spec, 300, eps, 200);
        const Series xb = simulate(b, spec, 300, eps, 200);
        Eigen::VectorXd cum(300);
        std::partial_sum(xa.begin(), xa.end(), cum.begin());
        EXPECT_LE((xb - cum).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Simulate, RejectsShortInnovations) {
    const ThetaFull th{0.2, Eigen::VectorXd(0), Eigen::VectorXd(0), 1.0};
    EXPECT_THROW(simulate(th, ModelSpec::farima(0, 0), 10, Eigen::VectorXd::Zero(14), 5), InvalidArgument);
}

TEST(AcfFarima, ClosedForms) {
    EXPECT_DOUBLE_EQ(acf_farima0d0(0.0, 2.0, 0), 2.0);
    EXPECT_NEAR(acf_farima0d0(0.0, 2.0, 3), 0.0, 1e-15);
    const double g0 = std::tgamma(0.5) / std::pow(std::tgamma(0.75), 2);
    EXPECT_NEAR(acf_farima0d0(0.25, 1.0, 0), g0, 1e-13);
    EXPECT_NEAR(acf_farima0d0(0.25, 1.0, 0), 1.18034, 1e-5);
    for (double d : {-0.4, -0.1, 0.1, 0.3, 0.45}) {
        EXPECT_NEAR(acf_farima0d0(d, 1.0, 1) / acf_farima0d0(d, 1.0, 0), d / (1 - d), 1e-13);
        // Gamma-function form at larger lags
        const double k = 7;
        const double direct = std::tgamma(1 - 2 * d) / (std::tgamma(1 - d) * std::tgamma(d)) * std::tgamma(k + d) /
                              std::tgamma(k + 1 - d);
        EXPECT_NEAR(acf_farima0d0(d, 1.0, 7), direct, 1e-12);
    }
    EXPECT_THROW(acf_farima0d0(0.5, 1.0, 0), InvalidArgument);
}

TEST(Simulate, Lag1AutocorrelationOfLongMemory) {
    // d / (1 - d) = 1/3 for d = 0.25
    const int n = 512, burn = 5000, seeds = 40;
    double acc = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const Eigen::VectorXd eps = normals(100 + s, n + burn);
        const Series x = simulate({0.25, Eigen::VectorXd(0), Eigen::VectorXd(0), 1.0}, ModelSpec::farima(0, 0), n, eps, burn);
        const Eigen::VectorXd c = x.array() - x.mean();
        acc += c.head(n - 1).dot(c.tail(n - 1)) / c.squaredNorm();
    }
    // Sample lag-1 autocorrelation is biased down by roughly (1 + 2 sum rho)/n under long memory.
    EXPECT_NEAR(acc / seeds, 1.0 / 3.0, 0.05);
}

TEST(Simulate, SampleAutocovariancesMatchClosedForm) {
    const int n = 8192, burn = 8192, seeds = 50;
    for (double d : {-0.25, 0.25}) {
        Eigen::MatrixXd g(6, seeds);
        for (int s = 0; s < seeds; ++s) {
            const Eigen::VectorXd eps = normals(1000 + s, n + burn);
            const Series x = simulate({d, Eigen::VectorXd(0), Eigen::VectorXd(0), 1.0}, ModelSpec::farima(0, 0), n, eps, burn);
            // The process mean is known to be zero; no centering.
            for (int k = 0; k <= 5; ++k) g(k, s) = x.head(n - k).dot(x.tail(n - k)) / n;
        }
        for (int k = 0; k <= 5; ++k) {
            const double mean = g.row(k).mean();
            const double se = std::sqrt((g.row(k).array() - mean).square().sum() / (seeds - 1) / seeds);
            const double want = acf_farima0d0(d, 1.0, k) * (n - k) / double(n);
            EXPECT_LE(std::abs(mean - want), 3.0 * se) << "d=" << d << " lag=" << k;
        }
    }
}
