#include "fmrlevy/gauss_rules.hpp"

#include <cmath>
#include <numbers>

#include "fmrlevy/errors.hpp"

namespace fmrlevy {

namespace {

// Symmetric Jacobi matrix with zero diagonal; mu0 is the total weight mass.
GaussRule golub_welsch(const Eigen::VectorXd& off_diagonal, double mu0) {
  const Eigen::Index n = off_diagonal.size() + 1;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  jacobi.diagonal(1) = off_diagonal;
  jacobi.diagonal(-1) = off_diagonal;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) throw NumericError("Golub-Welsch eigen decomposition failed");
  return {solver.eigenvalues(), mu0 * solver.eigenvectors().row(0).transpose().array().square().matrix()};
}

}  // namespace

GaussRule gauss_hermite(int n) {
  if (n < 1) throw DomainError("gauss_hermite: n must be positive");
  Eigen::VectorXd beta(n - 1);
  for (int i = 1; i < n; ++i) beta(i - 1) = std::sqrt(0.5 * i);
  return golub_welsch(beta, std::sqrt(std::numbers::pi));
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  Eigen::VectorXd beta(n - 1);
  for (int i = 1; i < n; ++i) beta(i - 1) = i / std::sqrt(4.0 * i * i - 1.0);
  return golub_welsch(beta, 2.0);
}

}  // namespace fmrlevy
