#include "qfb/stationary.hpp"

#include <cmath>
#include <vector>

#include "qfb/generator.hpp"

namespace qfb {

double closed_form_alpha(const PhysicalParams& params) {
  return 1.0 / std::sqrt(2.0 + params.tau() * params.kappa());
}

bool is_exact_dark_phase(double delta_phi) {
  const double p = normalize_phase(delta_phi);
  constexpr double tol = 1e-12;
  return p < tol || two_pi - p < tol || std::abs(p - pi) < tol;
}

DarkState dark_state(const PhysicalParams& params, const ModeGrid& grid) {
  const auto g = grid.couplings();
  const auto d = grid.detunings();

  double bath_sq = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double r = g[j] / d[j];
    bath_sq += r * r;
  }
  const double alpha = 1.0 / std::sqrt(2.0 + bath_sq);

  DarkState out;
  out.psi = WaveFunction(grid.size());
  out.psi.ce() = -alpha;
  out.psi.cc() = alpha;
  auto bath = out.psi.bath();
  for (std::size_t j = 0; j < g.size(); ++j) bath[j] = alpha * g[j] / d[j];

  out.alpha_grid = alpha;
  out.alpha_closed = closed_form_alpha(params);
  out.approximate = !is_exact_dark_phase(params.delta_phi());
  out.residual = stationarity_residual(out.psi, params, grid);
  return out;
}

double stationarity_residual(const WaveFunction& state,
                             const PhysicalParams& params,
                             const ModeGrid& grid) {
  const Generator m(params, grid);
  const auto x = state.amplitudes();
  std::vector<cplx> y(x.size());
  m.apply(x, y);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    s += std::norm(y[k] + params.omega_g() * x[k]);
  return std::sqrt(s);
}

}  // namespace qfb
