#pragma once

#include <Eigen/Dense>

namespace fmrlevy {

/// Nodes and weights of an n-point Gaussian rule.
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// ∫ f(x) e^{-x²} dx ≈ Σ wᵢ f(xᵢ), via the Golub–Welsch eigenproblem.
GaussRule gauss_hermite(int n);

/// ∫_{-1}^{1} f(x) dx ≈ Σ wᵢ f(xᵢ).
GaussRule gauss_legendre(int n);

}  // namespace fmrlevy
