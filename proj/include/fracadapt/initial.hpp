#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>

#include "fracadapt/model.hpp"
#include "fracadapt/residuals.hpp"

namespace fracadapt {

enum class InitialMethod { css, tapered_whittle };

InitialMethod parse_initial_method(std::string_view name);  // css|whittle
std::string initial_method_name(InitialMethod m);

/// Search interval for the memory parameter. The grid is lo, lo + step, ..., hi.
struct XiGrid {
    double lo = -0.4;
    double hi = 1.75;
    double step = 0.01;

    void validate() const;
};

struct WhittleOptions {
    /// Only Fourier frequencies 2 pi j / n with j a multiple of this are used.
    int taper_order = 2;
    XiGrid grid;
};

/// A root-n consistent starting point for the one-step update.
struct InitialFit {
    Theta1 theta1;
    Eigen::VectorXd theta2;
    double sigma2 = 0.0;
    double objective = 0.0;
    InitialMethod method = InitialMethod::css;
    bool hit_boundary = false;

    ThetaFull theta() const { return {theta1.xi, theta1.nu, theta2, sigma2}; }
};

/// Minimizes n^{-1} sum_t E_t(theta)^2 by a xi grid with theta2 profiled out by
/// least squares and nu by simplex search from zero, then refines xi by Brent's
/// method inside the best grid cell.
InitialFit css_fit(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionDesign& design,
                   const ModelSpec& spec, const XiGrid& grid = {});

/// Whittle estimate from the cosine-bell tapered periodogram.
InitialFit tapered_whittle_fit(const Eigen::Ref<const Eigen::VectorXd>& y, const ModelSpec& spec,
                               const WhittleOptions& options = {});

/// Least-squares theta2 for fixed theta1: regress alpha(B) y on alpha(B) z2 after centering.
Eigen::VectorXd profile_trend(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionDesign& design,
                              const ModelSpec& spec, const Theta1& theta1);

/// Cosine bell h_t = (1 - cos(2 pi t / n)) / 2, t = 1..n.
Eigen::VectorXd cosine_bell(Eigen::Index n);

/// Tapered periodogram |w(lambda_j)|^2 at lambda_j = 2 pi j / n for the given j.
Eigen::VectorXd tapered_periodogram(const Eigen::Ref<const Eigen::VectorXd>& y,
                                    const Eigen::Ref<const Eigen::VectorXi>& freqs);

/// Whittle spectral shape k(lambda; xi, nu) = |1 - e^{i lambda}|^{-2 xi} |MA / AR|^2.
double spectral_shape(double lambda, const Theta1& theta1, const ModelSpec& spec);

}  // namespace fracadapt
