#include <biphoton/sellmeier.hpp>

#include <cmath>
#include <string>

#include <biphoton/errors.hpp>

namespace biphoton {

double SellmeierCoefficients::n_squared(double l) const {
  return a + b / (l * l - c) - d * l * l;
}

double SellmeierCoefficients::index(double l) const {
  double n2 = n_squared(l);
  if (!(n2 > 0.0))
    throw InvalidConfig("squared index not positive at lambda = " +
                        std::to_string(l) + " um");
  return std::sqrt(n2);
}

double SellmeierCoefficients::index_derivative(double l) const {
  double n = index(l);
  double u = l * l - c;
  return -l * (b / (u * u) + d) / n;
}

void SellmeierSet::require_in_window(double l) const {
  if (!(l > lambda_min_um && l < lambda_max_um))
    throw OutOfValidityWindow("wavelength " + std::to_string(l) +
                              " um outside validity window (" +
                              std::to_string(lambda_min_um) + ", " +
                              std::to_string(lambda_max_um) + ") um");
}

SellmeierSet SellmeierSet::bbo() {
  SellmeierSet s;
  s.ordinary = {2.7405, 0.0184, 0.0179, 0.0155};
  s.extraordinary = {2.3730, 0.0128, 0.0156, 0.0044};
  s.lambda_min_um = 0.22;
  s.lambda_max_um = 1.06;
  return s;
}

}  // namespace biphoton
