#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "qfb/generator.hpp"
#include "qfb/grid.hpp"
#include "qfb/params.hpp"

namespace qfb {

/// J = i·M, the Jacobian of the linearized amplitude equations. The equations
/// are linear in the one-excitation subspace, so J does not depend on the base
/// state.
class JacobianOperator {
 public:
  /// Throws Error{structural} if the skew-Hermitian check fails.
  static JacobianOperator build(const PhysicalParams& params, const ModeGrid& grid);

  std::size_t dimension() const noexcept { return generator_.dimension(); }
  const Generator& generator() const noexcept { return generator_; }
  double omega_g() const noexcept { return generator_.omega_g(); }

  /// max_ab |J_ab + conj(J_ba)| / max_ab |J_ab|.
  double skew_defect() const;

 private:
  explicit JacobianOperator(Generator m) : generator_(std::move(m)) {}
  Generator generator_;
};

enum class EigenMethod {
  automatic,  ///< dense up to dense_method_limit, secular above
  dense,      ///< LAPACK dsyevd on the full matrix
  secular,    ///< arrowhead secular equation, O(N²)
};

inline constexpr std::size_t dense_method_limit = 2000;

std::string_view to_string(EigenMethod m);

struct ModeSpectrum {
  std::vector<double> mu;       ///< eigenvalues of M, ascending; λ = i·μ
  std::vector<double> weights;  ///< |⟨c_c|v⟩|²
  std::vector<double> osc;      ///< μ + ω_g

  EigenMethod method = EigenMethod::dense;
  double max_abs_re_lambda = 0.0;  ///< exactly 0 from the Hermitian solve
  double max_abs_lambda = 0.0;
  double weight_sum = 0.0;
  double max_residual = 0.0;  ///< max ‖M·v − μ·v‖ / max|M_ab|
  double skew_defect = 0.0;

  std::size_t size() const noexcept { return mu.size(); }
};

/// Throws Error{numerical} on solver failure.
ModeSpectrum eigenmodes(const JacobianOperator& jac,
                        EigenMethod method = EigenMethod::automatic);

struct VisibleMode {
  double osc = 0.0;
  double weight = 0.0;
};

/// Modes with w ≥ threshold·max(w), ascending in ω_osc. Modes closer than
/// dedup_tol collapse onto the heaviest of the cluster.
std::vector<VisibleMode> visible_modes(const ModeSpectrum& spec,
                                       double weight_threshold,
                                       double dedup_tol = 0.0);

std::vector<double> visible_frequencies(const ModeSpectrum& spec,
                                        double weight_threshold,
                                        double dedup_tol = 0.0);

/// Largest mismatch between the sorted ω_osc − ω_g values of `modes` inside
/// |ω_osc − ω_g| ≤ half_width and their mirror images.
double symmetry_defect(const std::vector<double>& osc, double omega_g,
                       double half_width);

}  // namespace qfb
