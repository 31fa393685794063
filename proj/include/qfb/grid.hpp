#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qfb/params.hpp"

namespace qfb {

/// Discretized external-cavity mode bath.
///
/// Detunings δ_j are measured from ω₀+ω_g on a staggered symmetric grid
/// δ = ±(j−½)·Δδ, j = 1..P, Δδ = W/P, so δ = 0 is never a grid point and
/// detuning[k] == −detuning[2P−1−k] bit for bit. Couplings carry the
/// midpoint-rule weight sqrt(Δδ) so that Σ_j g_j² f(δ_j) approximates
/// ∫ G₀² sin²(kL) f(δ) dδ.
class ModeGrid {
 public:
  /// Throws Error{grid_resolution} if Δδ ≥ π/(4τ) or W < max(8ω_g, 4κ).
  static ModeGrid make(const PhysicalParams& params, double half_bandwidth,
                       std::size_t num_pairs);

  double half_bandwidth() const noexcept { return half_bandwidth_; }
  std::size_t num_pairs() const noexcept { return num_pairs_; }
  std::size_t size() const noexcept { return detunings_.size(); }
  double spacing() const noexcept { return spacing_; }

  std::span<const double> detunings() const noexcept { return detunings_; }
  std::span<const double> couplings() const noexcept { return couplings_; }

  /// Index of the mode at −δ_k.
  std::size_t mirror(std::size_t k) const noexcept { return size() - 1 - k; }

 private:
  ModeGrid() = default;

  double half_bandwidth_ = 0.0;
  std::size_t num_pairs_ = 0;
  double spacing_ = 0.0;
  std::vector<double> detunings_;
  std::vector<double> couplings_;
};

/// g_j = G₀·sin((Δφ+π)/2 + δ_j·τ/2)·sqrt(Δδ).
///
/// The carrier ω₀ enters only through ω₀τ = Δφ + π (mod 2π); the remaining
/// integer multiple of π in k_jL flips the sign of every coupling at once and
/// is fixed to +.
std::vector<double> build_couplings(const PhysicalParams& params,
                                    std::span<const double> detunings,
                                    double spacing);

/// Grid-resolution bound π/(4τ) on Δδ.
double max_grid_spacing(const PhysicalParams& params);

/// Lower bound max(8ω_g, 4κ) on the half-bandwidth.
double min_half_bandwidth(const PhysicalParams& params);

/// Desk-scale grid: W = max(12ω_g, 4κ), P = max(1500, ⌈W / (0.8·π/(4τ))⌉).
/// For R ≤ 1.5 and n ≤ 4 this is W = 12, P = 1500 (N = 3002 amplitudes).
ModeGrid default_grid(const PhysicalParams& params);

}  // namespace qfb
