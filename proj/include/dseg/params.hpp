#pragma once

namespace dseg {

/// Detection parameters. The first block carries the method defaults;
/// the last three are required by the implementation but left unspecified
/// by the method description.
struct DetectorParams {
  double sigma_a = 0.05;   // initial std-dev of the direction components
  double sigma_b = 0.05;
  double sigma_x0 = 1.0;   // initial std-dev of the origin, pixels
  double sigma_y0 = 1.0;
  double delta_t = 1.0;    // extension step, pixels
  double tau_angle = 0.95; // cosine gate on gradient direction
  double tau_gmax = 10.0;  // seed contrast threshold, raw Sobel units
  int n_o = 2;             // 2*n_o + 1 cross-track measures
  double sigma_r = 0.5;    // cross-track observation std-dev, pixels

  int min_support = 5;
  int max_consecutive_misses = 2;
  double chi2_merge = 5.99;  // 95% quantile, 2 DOF

  /// Throws Error(kInvalidConfiguration) on a violated invariant.
  void validate() const;
};

struct HierarchicalParams {
  DetectorParams base;
  int n_p = 3;
  double s_p = 2.0;
  /// A segment found at a level carves a projected coarse segment's intervals
  /// only when both its extremities lie within this many pixels of the
  /// projected supporting line.
  double carve_tolerance = 2.0;

  void validate() const;
};

}  // namespace dseg
