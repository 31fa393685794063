#include <cmath>
#include <string>

#include "qfb/arrowhead.hpp"
#include "qfb/dynamics.hpp"
#include "qfb/error.hpp"
#include "qfb/generator.hpp"

namespace qfb {

Trajectory propagate_spectral(const WaveFunction& state0, const PhysicalParams& params,
                              const ModeGrid& grid, double t_end, double dt) {
  if (state0.size() != grid.size() + 2)
    throw Error(ErrorCategory::structural, "dynamics", "state",
                "initial state has " + std::to_string(state0.size()) +
                    " amplitudes, grid needs " + std::to_string(grid.size() + 2));
  if (!(t_end >= 0.0) || !std::isfinite(t_end) || !(dt > 0.0))
    throw Error(ErrorCategory::step_size, "dynamics", "dt",
                "spectral propagation needs t_end >= 0 and dt > 0");

  const Generator m(params, grid);
  const std::size_t nb = grid.size();
  // Spoke 0 is the emitter, spokes 1.. the bath; the cavity is the head.
  std::vector<double> d(nb + 1), z(nb + 1);
  d[0] = 0.0;
  z[0] = m.omega_g();
  for (std::size_t j = 0; j < nb; ++j) {
    d[j + 1] = m.bath_diagonal()[j];
    z[j + 1] = m.couplings()[j];
  }
  const ArrowheadEigen eig = arrowhead_eigen(0.0, d, z);
  const double ztol = arrowhead_deflation_tolerance(0.0, d, z);
  const auto c0 = state0.amplitudes();
  auto spoke_amp = [&](std::size_t i) { return i == 0 ? c0[0] : c0[i + 1]; };

  // Modes with a cavity component: amplitude on c_c and c_e.
  std::vector<double> mu;
  std::vector<cplx> ac, ae;
  std::vector<std::size_t> index;
  for (std::size_t k = 0; k < eig.values.size(); ++k) {
    const double w = eig.head_weights[k];
    if (w <= 0.0) continue;
    const double s = std::sqrt(w);
    cplx overlap = s * c0[1];
    for (std::size_t i = 0; i <= nb; ++i)
      overlap += s * z[i] / ((eig.origins[k] - d[i]) + eig.shifts[k]) * spoke_amp(i);
    const double ve = s * z[0] / ((eig.origins[k] - d[0]) + eig.shifts[k]);
    mu.push_back(eig.values[k]);
    ac.push_back(s * overlap);
    ae.push_back(ve * overlap);
    index.push_back(k);
  }

  const auto steps = t_end > 0.0 ? static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9))
                                 : std::size_t{0};
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : dt;

  Trajectory tr;
  tr.dt = h;
  tr.times.reserve(steps + 1);
  tr.p_e.reserve(steps + 1);
  tr.p_c.reserve(steps + 1);
  tr.p_bath.reserve(steps + 1);

  std::vector<cplx> phase(mu.size(), cplx(1.0, 0.0));
  std::vector<cplx> step_rot(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) step_rot[k] = std::polar(1.0, mu[k] * h);

  for (std::size_t s = 0; s <= steps; ++s) {
    const double t = s == steps ? t_end : static_cast<double>(s) * h;
    // Fresh phases every 256 samples keep the rotation error at rounding level.
    if (s % 256 == 0)
      for (std::size_t k = 0; k < mu.size(); ++k) phase[k] = std::polar(1.0, mu[k] * t);
    cplx cc = 0.0, ce = 0.0;
    for (std::size_t k = 0; k < mu.size(); ++k) {
      cc += ac[k] * phase[k];
      ce += ae[k] * phase[k];
      phase[k] *= step_rot[k];
    }
    const double pe = std::norm(ce), pc = std::norm(cc);
    tr.times.push_back(t);
    tr.p_e.push_back(pe);
    tr.p_c.push_back(pc);
    tr.p_bath.push_back(1.0 - pe - pc);
  }

  // Full final state: non-deflated modes plus spokes split off exactly.
  std::vector<cplx> cf(c0.size(), 0.0);
  for (std::size_t q = 0; q < mu.size(); ++q) {
    const std::size_t k = index[q];
    const double s = std::sqrt(eig.head_weights[k]);
    const cplx amp = (ac[q] / s) * std::polar(1.0, mu[q] * t_end);
    cf[1] += s * amp;
    for (std::size_t i = 0; i <= nb; ++i) {
      const double v = s * z[i] / ((eig.origins[k] - d[i]) + eig.shifts[k]);
      cf[i == 0 ? 0 : i + 1] += v * amp;
    }
  }
  for (std::size_t i = 0; i <= nb; ++i)
    if (std::abs(z[i]) <= ztol) cf[i == 0 ? 0 : i + 1] += spoke_amp(i) * std::polar(1.0, d[i] * t_end);

  tr.final_state = WaveFunction(std::move(cf));
  tr.norm_drift = std::abs(tr.final_state.norm_squared() - state0.norm_squared());
  tr.energy_drift =
      std::abs(m.expectation(tr.final_state.amplitudes()) - m.expectation(c0));
  return tr;
}

}  // namespace qfb
