#include "fracadapt/innovations.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "fracadapt/errors.hpp"

namespace fracadapt {

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

double normal_pdf(double x, double mean, double sd) {
    const double z = (x - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * kPi));
}

struct Component {
    double weight;
    double mean;
    double sd;
};

// -d/dx log of a normal mixture, with component responsibilities formed in
// log space so the tails do not underflow to 0/0.
template <std::size_t K>
double mixture_score(double x, const std::array<Component, K>& comps) {
    std::array<double, K> logw{};
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < K; ++k) {
        const double z = (x - comps[k].mean) / comps[k].sd;
        logw[k] = std::log(comps[k].weight / comps[k].sd) - 0.5 * z * z;
        top = std::max(top, logw[k]);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double w = std::exp(logw[k] - top);
        num += w * (x - comps[k].mean) / (comps[k].sd * comps[k].sd);
        den += w;
    }
    return num / den;
}

constexpr std::array<Component, 2> kSymMixture{{{0.5, -3.0, 1.0}, {0.5, 3.0, 1.0}}};
constexpr std::array<Component, 2> kAsymMixture{{{0.05, 0.0, 5.0}, {0.95, 0.0, 1.0}}};

constexpr double kT5Df = 5.0;

}  // namespace

double InnovationDist::scale() const {
    switch (kind) {
        case InnovationKind::gaussian: return 1.0;
        case InnovationKind::sym_mixture: return 1.0 / std::sqrt(10.0);
        case InnovationKind::asym_mixture_scaled: return 1.0 / std::sqrt(0.05 * 25.0 + 0.95);
        case InnovationKind::laplace_scaled: return 1.0;  // drawn directly at unit variance
        case InnovationKind::t5_scaled: return std::sqrt((kT5Df - 2.0) / kT5Df);
    }
    return 1.0;
}

std::string InnovationDist::name() const {
    switch (kind) {
        case InnovationKind::gaussian: return "gaussian";
        case InnovationKind::sym_mixture: return "mixsym";
        case InnovationKind::asym_mixture_scaled: return "mixasym";
        case InnovationKind::laplace_scaled: return "laplace";
        case InnovationKind::t5_scaled: return "t5";
    }
    return "unknown";
}

InnovationDist InnovationDist::parse(std::string_view name) {
    if (name == "gaussian") return {InnovationKind::gaussian};
    if (name == "mixsym") return {InnovationKind::sym_mixture};
    if (name == "mixasym") return {InnovationKind::asym_mixture_scaled};
    if (name == "laplace") return {InnovationKind::laplace_scaled};
    if (name == "t5") return {InnovationKind::t5_scaled};
    throw InvalidArgument("unknown distribution '" + std::string(name) + "'");
}

Eigen::VectorXd sample(const InnovationDist& dist, Eigen::Index n, Engine& rng) {
    if (n <= 0) throw InvalidArgument("sample: n must be positive");
    Eigen::VectorXd out(n);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;
    const double c = dist.scale();
    switch (dist.kind) {
        case InnovationKind::gaussian:
            for (auto& v : out) v = normal(rng);
            break;
        case InnovationKind::sym_mixture:
            for (auto& v : out) {
                const double mean = unif(rng) < 0.5 ? -3.0 : 3.0;
                v = c * (mean + normal(rng));
            }
            break;
        case InnovationKind::asym_mixture_scaled:
            for (auto& v : out) {
                const double sd = unif(rng) < 0.05 ? 5.0 : 1.0;
                v = c * sd * normal(rng);
            }
            break;
        case InnovationKind::laplace_scaled: {
            std::exponential_distribution<double> expo(std::sqrt(2.0));
            for (auto& v : out) {
                const double mag = expo(rng);
                v = unif(rng) < 0.5 ? -mag : mag;
            }
            break;
        }
        case InnovationKind::t5_scaled: {
            std::student_t_distribution<double> student(kT5Df);
            for (auto& v : out) v = c * student(rng);
            break;
        }
    }
    return out;
}

double density(const InnovationDist& dist, double s) {
    const double c = dist.scale();
    switch (dist.kind) {
        case InnovationKind::gaussian: return normal_pdf(s, 0.0, 1.0);
        case InnovationKind::sym_mixture: {
            const double x = s / c;
            return (0.5 * normal_pdf(x, -3.0, 1.0) + 0.5 * normal_pdf(x, 3.0, 1.0)) / c;
        }
        case InnovationKind::asym_mixture_scaled: {
            const double x = s / c;
            return (0.05 * normal_pdf(x, 0.0, 5.0) + 0.95 * normal_pdf(x, 0.0, 1.0)) / c;
        }
        case InnovationKind::laplace_scaled:
            return std::exp(-std::sqrt(2.0) * std::abs(s)) / std::sqrt(2.0);
        case InnovationKind::t5_scaled: {
            const double x = s / c;
            const double nu = kT5Df;
            const double k = std::tgamma(0.5 * (nu + 1.0)) / (std::sqrt(nu * kPi) * std::tgamma(0.5 * nu));
            return k * std::pow(1.0 + x * x / nu, -0.5 * (nu + 1.0)) / c;
        }
    }
    return 0.0;
}

double true_score(const InnovationDist& dist, double s) {
    const double c = dist.scale();
    switch (dist.kind) {
        case InnovationKind::gaussian: return s;
        case InnovationKind::sym_mixture: return mixture_score(s / c, kSymMixture) / c;
        case InnovationKind::asym_mixture_scaled: return mixture_score(s / c, kAsymMixture) / c;
        case InnovationKind::laplace_scaled:
            if (s == 0.0) return 0.0;
            return s > 0.0 ? std::sqrt(2.0) : -std::sqrt(2.0);
        case InnovationKind::t5_scaled: {
            const double x = s / c;
            return (kT5Df + 1.0) * x / (kT5Df + x * x) / c;
        }
    }
    return 0.0;
}

double true_info(const InnovationDist& dist) {
    switch (dist.kind) {
        case InnovationKind::gaussian: return 1.0;
        case InnovationKind::laplace_scaled: return 2.0;
        case InnovationKind::t5_scaled: {
            // (nu + 1) / (nu + 3) for the standard t, rescaled to unit variance.
            const double c = dist.scale();
            return (kT5Df + 1.0) / (kT5Df + 3.0) / (c * c);
        }
        default: break;
    }
    return expect(dist, [&](double s) {
        const double psi = true_score(dist, s);
        return psi * psi;
    });
}

}  // namespace fracadapt
