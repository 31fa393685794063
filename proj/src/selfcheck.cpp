#include "qfb/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qfb/dynamics.hpp"
#include "qfb/error.hpp"
#include "qfb/spectrum.hpp"
#include "qfb/stability.hpp"
#include "qfb/stationary.hpp"

namespace qfb {

namespace {

CheckItem below(std::string name, double value, double limit, std::string detail = {}) {
  return {std::move(name), value < limit, value, limit, std::move(detail)};
}

WaveFunction random_state(std::size_t bath, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  WaveFunction psi(bath);
  for (cplx& a : psi.amplitudes()) a = cplx(gauss(rng), gauss(rng));
  const double s = 1.0 / psi.norm();
  for (cplx& a : psi.amplitudes()) a *= s;
  return psi;
}

}  // namespace

std::vector<CheckItem> run_selfcheck(const RunConfig& cfg) {
  std::vector<CheckItem> items;
  const PhysicalParams p = cfg.params();
  const ModeGrid grid = cfg.grid(p);

  {
    const WaveFunction psi = random_state(grid.size(), 20240611);
    const Trajectory tr = integrate(psi, p, grid, cfg.t_end, cfg.dt);
    items.push_back(below("norm-conservation", tr.norm_drift, 1e-8, "random state over t_end"));
    items.push_back(below("energy-conservation", tr.energy_drift, 1e-8, "random state over t_end"));
    items.push_back(below("probability-sum", tr.max_sum_defect, 1e-8, "max |p_e+p_c+p_bath-1|"));
  }

  const JacobianOperator jac = JacobianOperator::build(p, grid);
  items.push_back(below("skew-hermitian", jac.skew_defect(), 1e-14, "max|J+J^H|/max|J|"));
  const ModeSpectrum spec = eigenmodes(jac);
  items.push_back(below("purely-imaginary", spec.max_abs_re_lambda,
                        1e-12 * spec.max_abs_lambda + 1e-300, "max|Re lambda|"));
  items.push_back(below("weight-completeness", std::abs(spec.weight_sum - 1.0), 1e-10,
                        "|sum w - 1|"));
  items.push_back(below("eigen-residual", spec.max_residual, 1e-10, "max|Mv-mu v|/max|M|"));

  {
    const PhysicalParams pd = p.with_delta_phi(pi);
    const ModeGrid gd = cfg.grid(pd);
    const DarkState dark = dark_state(pd, gd);
    items.push_back(below("dark-state-stationary", dark.residual, 1e-10, "delta_phi = pi"));
  }

  {
    double worst = 0.0;
    for (double dphi : {0.0, 0.5 * pi, pi, 1.5 * pi}) {
      const PhysicalParams q = p.with_delta_phi(dphi);
      const RootSet a = find_roots(CharEqn(q, Kernel::cos));
      const RootSet b = find_roots(CharEqn(q.with_delta_phi(dphi - 0.5 * pi), Kernel::sin));
      if (a.roots.size() != b.roots.size()) {
        worst = INFINITY;
        break;
      }
      for (std::size_t k = 0; k < a.roots.size(); ++k)
        worst = std::max(worst, std::abs(a.roots[k] - b.roots[k]));
    }
    items.push_back(below("dimer-mapping", worst, 1e-12, "cos(dphi) vs sin(dphi-pi/2) roots"));
  }

  for (const ProductLawRow& row : product_law(cfg.n_max)) {
    items.push_back({"product-law n=" + std::to_string(row.n), row.pass, row.rel_error, 0.02,
                     "n*Rbar = " + std::to_string(row.product)});
  }
  return items;
}

}  // namespace qfb
