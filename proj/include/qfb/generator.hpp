#pragma once

#include <span>
#include <vector>

#include "qfb/grid.hpp"
#include "qfb/params.hpp"
#include "qfb/wavefunction.hpp"

namespace qfb {

/// Real symmetric generator M of the autonomous amplitude equations
/// dc/dt = i·M·c on [c_e, c_c, c_1 … c_2P]:
///
///   M[e,c] = M[c,e] = ω_g
///   M[c,j] = M[j,c] = g_j
///   M[j,j] = −(ω_g + δ_j)
///
/// and zero elsewhere. It is an arrowhead matrix centred on the cavity row,
/// so applying it costs O(N).
class Generator {
 public:
  Generator(const PhysicalParams& params, const ModeGrid& grid);

  std::size_t dimension() const noexcept { return diag_.size() + 2; }
  double omega_g() const noexcept { return omega_g_; }
  std::span<const double> couplings() const noexcept { return coupling_; }
  /// Bath diagonal −(ω_g + δ_j).
  std::span<const double> bath_diagonal() const noexcept { return diag_; }

  /// y = M·x. Throws Error{structural} on dimension mismatch.
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  void apply(std::span<const double> x, std::span<double> y) const;

  /// ⟨x, M x⟩ (real for Hermitian M).
  double expectation(std::span<const cplx> x) const;

  /// Row-major dense copy of M.
  std::vector<double> dense() const;

  /// max|M_ab|, the scale for relative tolerances.
  double max_abs_entry() const;

 private:
  double omega_g_;
  std::vector<double> coupling_;
  std::vector<double> diag_;
};

}  // namespace qfb
