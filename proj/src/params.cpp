#include "qfb/params.hpp"

#include <cmath>
#include <string>

#include "qfb/error.hpp"

namespace qfb {

double normalize_phase(double phase) {
  double r = std::fmod(phase, two_pi);
  if (r < 0.0) r += two_pi;
  // fmod of a value just below a multiple of 2π can round up to 2π.
  if (r >= two_pi) r = 0.0;
  return r;
}

PhysicalParams PhysicalParams::make(double omega_g, int n, double R,
                                    double delta_phi) {
  auto domain = [](const char* field, const std::string& msg) {
    return Error(ErrorCategory::parameter_domain, "core-model", field, msg);
  };
  if (!(omega_g > 0.0) || !std::isfinite(omega_g))
    throw domain("omega_g", "omega_g must be positive and finite");
  if (n < 1) throw domain("n", "commensurability index n must be >= 1");
  if (!(R > 0.0) || !std::isfinite(R))
    throw domain("R", "damping ratio R must be positive and finite");
  if (!std::isfinite(delta_phi))
    throw domain("delta_phi", "feedback phase must be finite");

  PhysicalParams p;
  p.omega_g_ = omega_g;
  p.n_ = n;
  p.R_ = R;
  p.delta_phi_ = normalize_phase(delta_phi);
  p.kappa_ = 2.0 * R * omega_g;
  p.tau_g_ = two_pi / omega_g;
  p.tau_ = n * p.tau_g_;
  p.G0_ = std::sqrt(2.0 * p.kappa_ / pi);
  return p;
}

PhysicalParams PhysicalParams::with_R(double R) const {
  return make(omega_g_, n_, R, delta_phi_);
}

PhysicalParams PhysicalParams::with_delta_phi(double delta_phi) const {
  return make(omega_g_, n_, R_, delta_phi);
}

}  // namespace qfb
