#include <biphoton/gaussian.hpp>

#include <algorithm>
#include <cmath>

#include <biphoton/errors.hpp>
#include <biphoton/units.hpp>

namespace biphoton {

namespace {

// Cholesky log-determinant; false when the matrix is not positive definite.
bool spd_log_det(const Eigen::MatrixXd& m, double& out) {
  if (!m.allFinite()) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return false;
  out = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return std::isfinite(out);
}

std::vector<int> complement_of(const std::vector<int>& keep) {
  std::vector<int> disc;
  for (int i = 0; i < kCoordCount; ++i)
    if (std::find(keep.begin(), keep.end(), i) == keep.end())
      disc.push_back(i);
  return disc;
}

Eigen::MatrixXd submatrix(const Eigen::Matrix<double, 6, 6>& a,
                          const std::vector<int>& rows,
                          const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
  return out;
}

}  // namespace

std::string soft_direction(const Eigen::MatrixXd& m,
                           const std::vector<int>& coords) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) return "unknown direction";
  int soft = 0;
  es.eigenvectors().col(0).cwiseAbs().maxCoeff(&soft);
  std::string name = soft < static_cast<int>(coords.size())
                         ? coord_name(coords[soft])
                         : "?";
  return name + " (least-confined eigenvalue " +
         std::to_string(es.eigenvalues()(0)) + ")";
}

double GaussianKernel::value(const Eigen::VectorXd& a,
                             const Eigen::VectorXd& a2) const {
  return std::exp(a.dot(p * a) + a2.dot(p * a2) + 2.0 * a.dot(w * a2));
}

double gaussian_norm_integral(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw InvalidConfig("norm integral needs a square matrix");
  double ld;
  if (!spd_log_det(m, ld)) {
    std::vector<int> labels(m.rows());
    for (int i = 0; i < m.rows(); ++i) labels[i] = i % kCoordCount;
    throw NotPositiveDefinite("integrand not confined along " +
                              soft_direction(m, labels));
  }
  double n = static_cast<double>(m.rows());
  return std::pow(units::kPi, 0.5 * n) * std::exp(-0.5 * ld);
}

GaussianKernel reduce_pure_state(const QuadraticForm& a,
                                 const std::vector<int>& keep) {
  if (keep.empty()) throw InvalidGrid("must keep at least one coordinate");
  std::vector<int> seen;
  for (int c : keep) {
    if (c < 0 || c >= kCoordCount)
      throw InvalidGrid("coordinate index out of range");
    if (std::find(seen.begin(), seen.end(), c) != seen.end())
      throw InvalidGrid("duplicate coordinate in subset");
    seen.push_back(c);
  }
  std::vector<int> disc = complement_of(keep);

  Eigen::MatrixXd a_aa = submatrix(a.a, keep, keep);
  GaussianKernel k;
  k.coords = keep;
  if (disc.empty()) {
    k.p = a_aa;
    k.w = Eigen::MatrixXd::Zero(a_aa.rows(), a_aa.cols());
    return k;
  }

  Eigen::MatrixXd a_bb = submatrix(a.a, disc, disc);
  Eigen::MatrixXd a_ab = submatrix(a.a, keep, disc);

  Eigen::LLT<Eigen::MatrixXd> llt((-a_bb).eval());
  if (llt.info() != Eigen::Success)
    throw DiscardedBlockNotDefinite(
        "discarded block is not negative definite; unconfined direction " +
        soft_direction(-a_bb, disc));

  // Wc = 1/2 A_ab (-A_bb)^{-1} A_ab^T, positive semidefinite.
  Eigen::MatrixXd wc = 0.5 * a_ab * llt.solve(a_ab.transpose());
  wc = 0.5 * (wc + wc.transpose()).eval();

  k.p = a_aa + wc;
  k.w = wc;

  double ld;
  if (!spd_log_det(-(k.p + k.w), ld))
    throw DiscardedBlockNotDefinite(
        "reduced kernel is not normalizable; unconfined direction " +
        soft_direction(-(k.p + k.w), keep));
  return k;
}

double purity(const GaussianKernel& k) {
  double ld_u, ld_v;
  if (!spd_log_det(-(k.p + k.w), ld_u))
    throw NotTraceClass("kernel diagonal not integrable along " +
                        soft_direction(-(k.p + k.w), k.coords));
  if (!spd_log_det(-(k.p - k.w), ld_v))
    throw NotTraceClass("kernel square not integrable along " +
                        soft_direction(-(k.p - k.w), k.coords));
  return std::exp(0.5 * (ld_u - ld_v));
}

double detection_probability_ratio(const Eigen::MatrixXd& a_num,
                                   const Eigen::MatrixXd& a_den) {
  if (a_num.rows() != a_den.rows() || a_num.cols() != a_den.cols())
    throw InvalidConfig("forms must have matching dimensions");
  std::vector<int> labels(a_num.rows());
  for (int i = 0; i < a_num.rows(); ++i) labels[i] = i % kCoordCount;
  double ld_num, ld_den;
  if (!spd_log_det((-2.0 * a_num).eval(), ld_num))
    throw NotPositiveDefinite("numerator mass diverges along " +
                              soft_direction((-2.0 * a_num).eval(), labels));
  if (!spd_log_det((-2.0 * a_den).eval(), ld_den))
    throw NotPositiveDefinite("denominator mass diverges along " +
                              soft_direction((-2.0 * a_den).eval(), labels));
  return std::exp(0.5 * (ld_den - ld_num));
}

double detection_probability_ratio(const QuadraticForm& a_num,
                                   const QuadraticForm& a_den) {
  return detection_probability_ratio(Eigen::MatrixXd(a_num.a),
                                     Eigen::MatrixXd(a_den.a));
}

bool is_negative_semidefinite(const Eigen::MatrixXd& a, double tol_scale) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) return false;
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return es.eigenvalues().maxCoeff() <= tol_scale * scale;
}

}  // namespace biphoton
