#include <biphoton/units.hpp>

#include <cmath>

#include <biphoton/errors.hpp>

namespace biphoton::units {

double bandwidth_to_angular(double sigma_nm, double lambda0_um) {
  if (!(lambda0_um > 0.0) || std::isinf(lambda0_um))
    throw NonPositiveInput("carrier wavelength must be a positive finite length");
  if (std::isinf(sigma_nm) && sigma_nm > 0.0) return sigma_nm;
  if (!(sigma_nm > 0.0))
    throw NonPositiveInput("bandwidth must be a positive magnitude");
  return 2.0 * kPi * kSpeedOfLightUmPerFs * (sigma_nm * 1e-3) /
         (lambda0_um * lambda0_um);
}

double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

}  // namespace biphoton::units
