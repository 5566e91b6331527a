#include "dseg/params.hpp"

#include <string>

#include "dseg/error.hpp"

namespace dseg {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidConfiguration, what);
}

}  // namespace

void DetectorParams::validate() const {
  require(sigma_a > 0 && sigma_b > 0, "sigma_a and sigma_b must be positive");
  require(sigma_x0 > 0 && sigma_y0 > 0,
          "sigma_x0 and sigma_y0 must be positive");
  require(sigma_r > 0, "sigma_r must be positive");
  require(delta_t > 0, "delta_t must be positive");
  require(tau_angle > 0 && tau_angle < 1, "tau_angle must lie in (0, 1)");
  require(tau_gmax >= 0, "tau_gmax must be non-negative");
  require(n_o >= 1, "n_o must be at least 1");
  require(min_support >= 2, "min_support must be at least 2");
  require(max_consecutive_misses >= 1,
          "max_consecutive_misses must be at least 1");
  require(chi2_merge > 0, "chi2_merge must be positive");
}

void HierarchicalParams::validate() const {
  base.validate();
  require(n_p >= 1, "n_p must be at least 1");
  require(s_p > 1.0 && s_p <= 2.0, "s_p must lie in (1, 2]");
  require(carve_tolerance >= 0, "carve_tolerance must be non-negative");
}

}  // namespace dseg
