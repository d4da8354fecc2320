#pragma once

#include <Eigen/Dense>
#include <vector>

#include <biphoton/gaussian.hpp>

namespace biphoton {

// Tensor-product grid quadrature settings. Results are bitwise identical
// whether `parallel` is on or off: partial sums are always accumulated per
// outermost slice in lexicographic order and folded serially.
struct QuadratureSpec {
  double half_width_sigmas = 6.0;  // per-coordinate window, >= 4 marginal sigmas
  int points = 41;                 // per axis, odd and >= 11
  enum class Rule { trapezoid, midpoint };
  Rule rule = Rule::trapezoid;
  bool parallel = true;
  // Re-run at doubled resolution and fail loudly if the result still moves.
  bool refine_check = true;
};

// ∫ exp(2 x^T a x) dx by brute-force grid summation. The form must be
// negative definite; exactly-zero cross couplings split the integral into
// independent factors (each at most 4-dimensional).
double oracle_mass(const Eigen::MatrixXd& a, const QuadratureSpec& spec);
double oracle_mass(const QuadraticForm& a, const QuadratureSpec& spec);

// Grid-discretized purity of the closed-form reduced kernel, for subsets of
// one or two coordinates.
double oracle_purity(const QuadraticForm& a, const std::vector<int>& keep,
                     const QuadratureSpec& spec);

// Same discretized purity, but every kernel value comes from direct
// quadrature of phi(a,.) phi(a',.) over the five discarded coordinates,
// bypassing the closed-form reduction. 21-point kernel grid; exempt from the
// refinement gate.
double oracle_purity_deep(const QuadraticForm& a, int keep_coord,
                          const QuadratureSpec& spec);

}  // namespace biphoton
