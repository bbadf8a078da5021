#include "fracadapt/initial.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "fracadapt/detail/nelder_mead.hpp"

namespace fracadapt {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;

bool nu_admissible(const Eigen::VectorXd& nu, const ModelSpec& spec) {
    return roots_outside_unit_circle(-nu.head(spec.p11)) && roots_outside_unit_circle(nu.tail(spec.p12));
}

void require_nonconstant(const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (y.size() < 2) throw DegenerateData("series has fewer than two observations");
    if (!y.allFinite()) throw DegenerateData("series contains non-finite values");
    if (y.maxCoeff() == y.minCoeff()) throw DegenerateData("series is constant");
}

struct Profiled {
    double value = kInf;
    Eigen::VectorXd nu;
};

// Grid search over xi with nu profiled by `inner`, then Brent refinement in the best cell.
struct XiSearch {
    double xi = 0.0;
    Profiled best;
    bool hit_boundary = false;
};

template <typename Inner>
XiSearch search_xi(const XiGrid& grid, Inner&& inner) {
    grid.validate();
    const int cells = static_cast<int>(std::floor((grid.hi - grid.lo) / grid.step + 1e-9));
    std::vector<double> points;
    for (int k = 0; k <= cells; ++k) points.push_back(grid.lo + k * grid.step);
    if (grid.hi - points.back() > 1e-12) points.push_back(grid.hi);

    XiSearch out;
    int best_k = -1;
    for (int k = 0; k < static_cast<int>(points.size()); ++k) {
        Profiled p = inner(points[k]);
        if (std::isfinite(p.value) && (best_k < 0 || p.value < out.best.value - kTieTol)) {
            best_k = k;
            out.best = std::move(p);
            out.xi = points[k];
        }
    }
    if (best_k < 0) throw EstimationFailed("objective is non-finite at every grid point");

    const double a = points[std::max(0, best_k - 1)];
    const double b = points[std::min<int>(static_cast<int>(points.size()) - 1, best_k + 1)];
    const auto refined = boost::math::tools::brent_find_minima(
        [&](double xi) {
            const double v = inner(xi).value;
            return std::isfinite(v) ? v : kInf;
        },
        a, b, 40);
    if (refined.second < out.best.value) {
        out.xi = refined.first;
        out.best = inner(refined.first);
    }

    const bool at_lo = best_k == 0, at_hi = best_k + 1 == static_cast<int>(points.size());
    if ((at_lo && out.xi - grid.lo < 1e-4) || (at_hi && grid.hi - out.xi < 1e-4)) {
        out.xi = at_lo ? grid.lo : grid.hi;
        out.best = inner(out.xi);
        out.hit_boundary = true;
    }
    return out;
}

// Centered filtered data and regressors at theta1.
struct Filtered {
    Eigen::VectorXd y;
    Eigen::MatrixXd z;
};

Filtered filter_all(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionDesign& design,
                    const ModelSpec& spec, const Theta1& theta1) {
    const FilterCoeffs alpha = ar_coeffs(theta1, spec, y.size());
    Filtered f;
    f.y = apply_filter(alpha, y);
    f.y.array() -= f.y.mean();
    f.z.resize(y.size(), design.p2());
    for (int j = 0; j < design.p2(); ++j) f.z.col(j) = apply_filter(alpha, design.z2.col(j));
    center_columns(f.z);
    return f;
}

double css_value(const Filtered& f, Eigen::VectorXd* theta2) {
    Eigen::VectorXd resid = f.y;
    if (f.z.cols() > 0) {
        const Eigen::VectorXd b = f.z.colPivHouseholderQr().solve(f.y);
        resid -= f.z * b;
        if (theta2) *theta2 = b;
    } else if (theta2) {
        theta2->resize(0);
    }
    const double v = resid.squaredNorm() / static_cast<double>(resid.size());
    return std::isfinite(v) ? v : kInf;
}

}  // namespace

InitialMethod parse_initial_method(std::string_view name) {
    if (name == "css") return InitialMethod::css;
    if (name == "whittle") return InitialMethod::tapered_whittle;
    throw InvalidArgument("unknown initial estimator '" + std::string(name) + "'");
}

std::string initial_method_name(InitialMethod m) { return m == InitialMethod::css ? "css" : "whittle"; }

void XiGrid::validate() const {
    if (!(lo < hi)) throw InvalidArgument("xi grid needs lo < hi");
    if (!(step > 0.0)) throw InvalidArgument("xi grid step must be positive");
    if (!(lo > -0.5)) throw InvalidArgument("xi grid must lie above -1/2");
}

Eigen::VectorXd profile_trend(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionDesign& design,
                              const ModelSpec& spec, const Theta1& theta1) {
    Eigen::VectorXd theta2;
    css_value(filter_all(y, design, spec, theta1), &theta2);
    return theta2;
}

InitialFit css_fit(const Eigen::Ref<const Eigen::VectorXd>& y, const RegressionDesign& design,
                   const ModelSpec& spec, const XiGrid& grid) {
    require_nonconstant(y);
    if (design.n() != y.size()) throw InvalidArgument("design length does not match series length");
    const int dim = spec.p11 + spec.p12;

    auto inner = [&](double xi) {
        auto objective = [&](const Eigen::VectorXd& nu) {
            if (!nu_admissible(nu, spec)) return kInf;
            return css_value(filter_all(y, design, spec, {xi, nu}), nullptr);
        };
        const auto nm = detail::nelder_mead(objective, Eigen::VectorXd::Zero(dim), 0.1, 1e-10, 400 * (dim + 1));
        return Profiled{nm.value, nm.x};
    };
    const auto found = search_xi(grid, inner);

    InitialFit fit;
    fit.method = InitialMethod::css;
    fit.theta1 = {found.xi, found.best.nu};
    fit.objective = css_value(filter_all(y, design, spec, fit.theta1), &fit.theta2);
    fit.sigma2 = fit.objective;
    fit.hit_boundary = found.hit_boundary;
    if (!(fit.sigma2 > 0.0)) throw DegenerateData("zero residual variance at the CSS minimum");
    return fit;
}

Eigen::VectorXd cosine_bell(Eigen::Index n) {
    Eigen::VectorXd h(n);
    for (Eigen::Index t = 0; t < n; ++t) h(t) = 0.5 * (1.0 - std::cos(2.0 * kPi * double(t + 1) / double(n)));
    return h;
}

Eigen::VectorXd tapered_periodogram(const Eigen::Ref<const Eigen::VectorXd>& y,
                                    const Eigen::Ref<const Eigen::VectorXi>& freqs) {
    const Eigen::Index n = y.size();
    const Eigen::VectorXd h = cosine_bell(n);
    const Eigen::VectorXd hy = h.cwiseProduct(y);
    const double norm = 2.0 * kPi * h.squaredNorm();
    Eigen::VectorXd I(freqs.size());
    for (Eigen::Index k = 0; k < freqs.size(); ++k) {
        const double lambda = 2.0 * kPi * freqs(k) / double(n);
        std::complex<double> w = 0.0;
        for (Eigen::Index t = 0; t < n; ++t) w += hy(t) * std::polar(1.0, lambda * double(t + 1));
        I(k) = std::norm(w) / norm;
    }
    return I;
}

double spectral_shape(double lambda, const Theta1& theta1, const ModelSpec& spec) {
    const std::complex<double> z = std::polar(1.0, lambda);
    std::complex<double> ar = 1.0, ma = 1.0, zk = 1.0;
    for (int k = 0; k < std::max(spec.p11, spec.p12); ++k) {
        zk *= z;
        if (k < spec.p11) ar -= theta1.nu(k) * zk;
        if (k < spec.p12) ma += theta1.nu(spec.p11 + k) * zk;
    }
    const double diff2 = 2.0 - 2.0 * std::cos(lambda);
    return std::pow(diff2, -theta1.xi) * std::norm(ma) / std::norm(ar);
}

InitialFit tapered_whittle_fit(const Eigen::Ref<const Eigen::VectorXd>& y, const ModelSpec& spec,
                               const WhittleOptions& options) {
    if (y.size() < 32) throw InvalidArgument("tapered Whittle needs at least 32 observations");
    require_nonconstant(y);
    if (options.taper_order < 1) throw InvalidArgument("taper order must be positive");
    const Eigen::Index n = y.size();

    std::vector<int> js;
    for (int j = options.taper_order; 2 * j <= n - 1; j += options.taper_order) js.push_back(j);
    if (js.empty()) throw DegenerateData("no usable Fourier frequencies");
    const Eigen::VectorXi freqs = Eigen::Map<const Eigen::VectorXi>(js.data(), Eigen::Index(js.size()));
    const Eigen::VectorXd I = tapered_periodogram(y, freqs);
    const double m = static_cast<double>(js.size());
    Eigen::VectorXd lambdas(freqs.size());
    for (Eigen::Index k = 0; k < freqs.size(); ++k) lambdas(k) = 2.0 * kPi * freqs(k) / double(n);

    auto scale_mean = [&](const Theta1& th) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < lambdas.size(); ++k) acc += I(k) / spectral_shape(lambdas(k), th, spec);
        return acc / m;
    };
    auto objective = [&](const Theta1& th) {
        double log_k = 0.0, ratio = 0.0;
        for (Eigen::Index k = 0; k < lambdas.size(); ++k) {
            const double kk = spectral_shape(lambdas(k), th, spec);
            log_k += std::log(kk);
            ratio += I(k) / kk;
        }
        const double v = std::log(ratio / m) + log_k / m;
        return std::isfinite(v) ? v : kInf;
    };

    const int dim = spec.p11 + spec.p12;
    auto inner = [&](double xi) {
        auto f = [&](const Eigen::VectorXd& nu) {
            if (!nu_admissible(nu, spec)) return kInf;
            return objective({xi, nu});
        };
        const auto nm = detail::nelder_mead(f, Eigen::VectorXd::Zero(dim), 0.1, 1e-12, 400 * (dim + 1));
        return Profiled{nm.value, nm.x};
    };
    const auto found = search_xi(options.grid, inner);

    InitialFit fit;
    fit.method = InitialMethod::tapered_whittle;
    fit.theta1 = {found.xi, found.best.nu};
    fit.objective = found.best.value;
    fit.sigma2 = 2.0 * kPi * scale_mean(fit.theta1);
    fit.hit_boundary = found.hit_boundary;
    if (!(fit.sigma2 > 0.0) || !std::isfinite(fit.sigma2)) throw EstimationFailed("non-positive Whittle scale");
    return fit;
}

}  // namespace fracadapt
