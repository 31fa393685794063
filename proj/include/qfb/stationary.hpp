#pragma once

#include "qfb/grid.hpp"
#include "qfb/params.hpp"
#include "qfb/wavefunction.hpp"

namespace qfb {

/// One-excitation dark state at t = 0:
///   c_e = −α,  c_c = +α,  c_j = α·g_j/δ_j.
///
/// alpha_grid normalizes the state on the actual grid and is what every
/// simulation uses; alpha_closed = (2 + τκ)^(−1/2) is the continuum value,
/// kept for reporting. For Δφ ∉ {0, π} the construction is only approximately
/// stationary and `approximate` is set.
struct DarkState {
  WaveFunction psi;
  double alpha_grid = 0.0;
  double alpha_closed = 0.0;
  bool approximate = false;
  /// stationarity_residual evaluated at construction.
  double residual = 0.0;
};

DarkState dark_state(const PhysicalParams& params, const ModeGrid& grid);

/// (2 + τκ)^(−1/2).
double closed_form_alpha(const PhysicalParams& params);

/// ‖dc/dt + i·ω_g·c‖ = ‖M·c + ω_g·c‖ for the rotating-frame generator M.
/// Zero iff the state is an exact eigenvector with eigenvalue −ω_g, i.e.
/// stationary up to a global phase.
double stationarity_residual(const WaveFunction& state,
                             const PhysicalParams& params,
                             const ModeGrid& grid);

/// True when Δφ is 0 or π to within 1e−12, where the odd-sum cancellation
/// makes the dark state exact on a symmetric grid.
bool is_exact_dark_phase(double delta_phi);

}  // namespace qfb
