#pragma once

namespace qfb {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

/// Wraps an angle into [0, 2π).
double normalize_phase(double phase);

/// Nondimensional system constants of the emitter / microcavity / half-cavity
/// system. Units: c₀ = 1; ω_g is usually fixed to 1 so that times are in
/// 1/ω_g. The round-trip delay is never a free input: τ = n·2π/ω_g.
///
/// Derived quantities follow from (ω_g, n, R, Δφ):
///   κ   = 2·R·ω_g          microcavity damping rate
///   τ_g = 2π/ω_g           Rabi period
///   τ   = n·τ_g            external-cavity round trip
///   G₀  = sqrt(2κ/π)       mode-coupling prefactor
class PhysicalParams {
 public:
  /// Throws Error{parameter_domain} for non-positive ω_g, n or R.
  static PhysicalParams make(double omega_g, int n, double R, double delta_phi);

  double omega_g() const noexcept { return omega_g_; }
  int n() const noexcept { return n_; }
  double R() const noexcept { return R_; }
  double delta_phi() const noexcept { return delta_phi_; }

  double kappa() const noexcept { return kappa_; }
  double tau_g() const noexcept { return tau_g_; }
  double tau() const noexcept { return tau_; }
  double G0() const noexcept { return G0_; }

  /// Same system with a different damping ratio or phase.
  PhysicalParams with_R(double R) const;
  PhysicalParams with_delta_phi(double delta_phi) const;

 private:
  PhysicalParams() = default;

  double omega_g_ = 1.0;
  int n_ = 1;
  double R_ = 0.0;
  double delta_phi_ = 0.0;
  double kappa_ = 0.0;
  double tau_g_ = 0.0;
  double tau_ = 0.0;
  double G0_ = 0.0;
};

}  // namespace qfb
