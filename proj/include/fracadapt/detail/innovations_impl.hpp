#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <limits>

namespace fracadapt {

template <typename F>
double expect(const InnovationDist& dist, F&& f) {
    using boost::math::quadrature::gauss_kronrod;
    const auto integrand = [&](double s) {
        const double g = density(dist, s);
        return g == 0.0 ? 0.0 : f(s) * g;
    };
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double lower = gauss_kronrod<double, 61>::integrate(integrand, -inf, 0.0, 15, 1e-12);
    const double upper = gauss_kronrod<double, 61>::integrate(integrand, 0.0, inf, 15, 1e-12);
    return lower + upper;
}

}  // namespace fracadapt
