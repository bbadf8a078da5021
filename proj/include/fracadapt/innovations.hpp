#pragma once

#include <Eigen/Dense>

#include <string>
#include <string_view>

#include "fracadapt/rng.hpp"

namespace fracadapt {

enum class InnovationKind { gaussian, sym_mixture, asym_mixture_scaled, laplace_scaled, t5_scaled };

/// One of the five zero-mean, unit-variance innovation laws used in the efficiency study.
struct InnovationDist {
    InnovationKind kind = InnovationKind::gaussian;

    /// Factor applied to the raw draw to bring its variance to one.
    double scale() const;
    std::string name() const;

    /// Accepts gaussian|mixsym|mixasym|laplace|t5.
    static InnovationDist parse(std::string_view name);
};

Eigen::VectorXd sample(const InnovationDist& dist, Eigen::Index n, Engine& rng);

double density(const InnovationDist& dist, double s);
/// psi(s) = -g'(s) / g(s); the Laplace kink is assigned psi(0) = 0.
double true_score(const InnovationDist& dist, double s);
/// Fisher information for location, closed form where one exists.
double true_info(const InnovationDist& dist);

/// Integral of f(s) g(s) over the real line by adaptive Gauss-Kronrod, split at 0.
template <typename F>
double expect(const InnovationDist& dist, F&& f);

}  // namespace fracadapt

#include "fracadapt/detail/innovations_impl.hpp"
