#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include <biphoton/model.hpp>

namespace biphoton {

// Reduced density kernel over the retained coordinates:
// rho(a, a') ∝ exp(a^T P a + a'^T P a' + 2 a^T W a').
struct GaussianKernel {
  std::vector<int> coords;
  Eigen::MatrixXd p;
  Eigen::MatrixXd w;

  double value(const Eigen::VectorXd& a, const Eigen::VectorXd& a2) const;
};

// ∫ exp(-x^T M x) dx = pi^{n/2} det(M)^{-1/2}; M must be positive definite.
double gaussian_norm_integral(const Eigen::MatrixXd& m);

// Partial trace of the pure state |phi|: keeps `keep`, integrates the rest
// out in closed form. Throws DiscardedBlockNotDefinite when the discarded
// block is not negative definite or the reduced kernel is not normalizable;
// the message names the unconfined direction.
GaussianKernel reduce_pure_state(const QuadraticForm& a,
                                 const std::vector<int>& keep);

// Tr rho^2 / (Tr rho)^2 = sqrt(det(P+W) / det(P-W)).
double purity(const GaussianKernel& k);

// ∫exp(2 x^T Anum x) / ∫exp(2 x^T Aden x) for same-size forms; the numerator
// form must confine at least as strongly for the ratio to land in (0, 1].
double detection_probability_ratio(const Eigen::MatrixXd& a_num,
                                   const Eigen::MatrixXd& a_den);
double detection_probability_ratio(const QuadraticForm& a_num,
                                   const QuadraticForm& a_den);

bool is_negative_semidefinite(const Eigen::MatrixXd& a,
                              double tol_scale = 1e-12);

// Names the coordinate dominating the least-confined eigenvector of a matrix
// that was expected to be positive definite; labels pick from `coords`.
std::string soft_direction(const Eigen::MatrixXd& m,
                           const std::vector<int>& coords);

}  // namespace biphoton
