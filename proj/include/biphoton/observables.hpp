#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include <biphoton/gaussian.hpp>

namespace biphoton {

enum class Arm { signal, idler };
Arm partner(Arm arm);
const char* arm_name(Arm arm);

// Coordinate subsets used for efficiency ratios: the transverse block, the
// frequency block, or all six coordinates.
enum class Domain { spatial, spectral, full };
std::vector<int> domain_coords(Domain d);
const char* domain_name(Domain d);

// One arm's coordinates within a domain: signal/spatial -> {q_s_x, q_s_y},
// idler/spectral -> {omega_i}, and so on.
std::vector<int> arm_domain_coords(Arm arm, Domain d);

// Purity of the reduced state on `keep` for the fully filtered source.
double subsystem_purity(const ResolvedConfig& cfg,
                        const std::vector<int>& keep);

// Probability that the partner photon passes its filters given that
// `heralding_arm` fired, restricted to the given coordinate block:
// the fully filtered mass over the single-arm-filtered mass, both on the
// domain slice.
double heralding_efficiency(const ResolvedConfig& cfg, Arm heralding_arm,
                            Domain domain = Domain::spatial);

// Spectral purity of the heralded arm times the spectral heralding
// efficiency of its partner: the fraction of heralds that deliver a photon,
// discounted by how mixed that photon is.
double purity_efficiency_factor(const ResolvedConfig& cfg, Arm heralded_arm);

// The eight standard columns of a source report.
struct ObservablesReport {
  double purity_q_s = 0.0;
  double purity_q_i = 0.0;
  double purity_omega_s = 0.0;
  double purity_omega_i = 0.0;
  double eta_s = 0.0;  // spatial-block heralding efficiencies
  double eta_i = 0.0;
  double pef_signal = 0.0;
  double pef_idler = 0.0;
};
ObservablesReport make_report(const ResolvedConfig& cfg);

// Two-coordinate intensity slices through the six-dimensional mode function,
// all other coordinates held at zero.
enum class SliceDomain { spectral, spatial_x };
const char* slice_domain_name(SliceDomain d);

// Shape numbers of one slice, from the 2x2 covariance of its Gaussian:
//  - principal_angle_deg: orientation of the major axis in (-90, 90];
//  - deviation_from_antidiagonal_deg: axis distance from the -45 degree
//    anticorrelation diagonal, folded to [0, 90];
//  - alignment_deviation_deg: asymmetry-weighted distance from coordinate
//    alignment, asin(2|c12|/(c11+c22))/2; unlike the raw angle this decays
//    to zero as the spot rounds out.
struct TiltMetrics {
  double principal_angle_deg = 0.0;
  double deviation_from_antidiagonal_deg = 0.0;
  double alignment_deviation_deg = 0.0;
};
TiltMetrics slice_tilt(const ResolvedConfig& cfg, SliceDomain domain,
                       FilterMask mask);

struct SliceRequest {
  SliceDomain domain = SliceDomain::spectral;
  FilterMask mask = FilterMask::Both;
  int points = 101;  // odd, so the grid contains the origin
  std::optional<double> half_range;  // absent: six widest marginal sigmas
};

struct SliceGrid {
  SliceDomain domain = SliceDomain::spectral;
  FilterMask mask = FilterMask::Both;
  std::string row_name;  // signal coordinate
  std::string col_name;  // idler coordinate
  std::vector<double> row_values;
  std::vector<double> col_values;
  Eigen::MatrixXd values;  // normalized to unit maximum
  TiltMetrics tilt;
  double trapezoid_mass = 0.0;  // of the normalized values over the window
};

// Symmetric window wide enough for the slice: six times its widest marginal
// sigma. Throws InvalidGrid when the slice is not confining.
double slice_auto_half_range(const ResolvedConfig& cfg, SliceDomain domain,
                             FilterMask mask);

SliceGrid joint_intensity_slice(const ResolvedConfig& cfg,
                                const SliceRequest& req);

}  // namespace biphoton
