#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qfb {

/// Eigenvalues of the real symmetric arrowhead matrix
///
///   [ a    zᵀ ]
///   [ z    D  ]     D = diag(d),
///
/// together with the squared head component of each normalized eigenvector.
struct ArrowheadEigen {
  std::vector<double> values;        ///< ascending
  std::vector<double> head_weights;  ///< |v_head|², same order
  /// values[k] = origins[k] + shifts[k] with origins[k] a pole d_j, so that
  /// μ − d_i = (origins[k] − d_i) + shifts[k] keeps relative accuracy.
  std::vector<double> origins;
  std::vector<double> shifts;
  /// max |secular residual|·|v_head| over non-deflated eigenpairs, i.e. the
  /// 2-norm of M·v − μ·v for the unit eigenvector.
  double max_residual = 0.0;
  std::size_t deflated = 0;
};

/// Secular-equation solver: μ − a − Σ z_k²/(μ − d_k) = 0 in each pole interval.
///
/// Spokes with |z_k| ≲ ε‖M‖ and poles closer than ε‖M‖ are deflated first;
/// each remaining root is located by safeguarded Newton iteration in
/// coordinates shifted to the nearer pole, so μ − d_k keeps full relative
/// accuracy. Cost O(m²) for m spokes.
/// Spokes with |z_k| at or below this are deflated by arrowhead_eigen.
double arrowhead_deflation_tolerance(double a, std::span<const double> d,
                                     std::span<const double> z);

ArrowheadEigen arrowhead_eigen(double a, std::span<const double> d,
                               std::span<const double> z);

}  // namespace qfb
