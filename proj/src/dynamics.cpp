#include "qfb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qfb/error.hpp"
#include "qfb/generator.hpp"

namespace qfb {

WaveFunction derivative(const WaveFunction& state, const PhysicalParams& params,
                        const ModeGrid& grid) {
  const Generator m(params, grid);
  WaveFunction out(std::vector<cplx>(state.size()));
  m.apply(state.amplitudes(), out.amplitudes());
  for (cplx& a : out.amplitudes()) a = cplx(-a.imag(), a.real());
  return out;
}

double max_time_step(const PhysicalParams& params, const ModeGrid& grid) {
  return 0.05 / std::max({grid.half_bandwidth(), params.omega_g(), params.kappa()});
}

double default_time_step(const PhysicalParams& params, const ModeGrid& grid) {
  return 0.01 / std::max({grid.half_bandwidth(), params.omega_g(), params.kappa()});
}

namespace {

// Classical RK4 for dc/dt = i·M·c with M an arrowhead matrix. Each stage
// evaluates y = i·M·x in a single pass and folds it into the running
// combination k1 + 2k2 + 2k3 + k4, so a step costs four sweeps over the state.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(const Generator& m)
      : wg_(m.omega_g()),
        g_(m.couplings()),
        d_(m.bath_diagonal()),
        n_(m.dimension()),
        stage_(n_),
        acc_(n_) {}

  // Advances c by h; returns Σ_j |c_j|² over the bath after the step.
  double step(std::span<cplx> c, double h) {
    stage(c, c, stage_, 0.5 * h, 1.0, true);
    stage(stage_, c, stage_, 0.5 * h, 2.0, false);
    stage(stage_, c, stage_, h, 2.0, false);
    return finish(c, h);
  }

 private:
  // y = i·M·x;  next = base + a·y;  acc (=|+=) b·y.
  void stage(std::span<const cplx> x, std::span<const cplx> base,
             std::span<cplx> next, double a, double b, bool first) {
    const double xcr = x[1].real(), xci = x[1].imag();
    double sr = wg_ * x[0].real(), si = wg_ * x[0].imag();
    for (std::size_t j = 0; j < g_.size(); ++j) {
      const std::size_t k = j + 2;
      const double xr = x[k].real(), xi = x[k].imag();
      sr += g_[j] * xr;
      si += g_[j] * xi;
      const double mr = g_[j] * xcr + d_[j] * xr;
      const double mi = g_[j] * xci + d_[j] * xi;
      // y = i·(mr + i·mi)
      const double yr = -mi, yi = mr;
      acc_[k] = first ? cplx(b * yr, b * yi)
                      : cplx(acc_[k].real() + b * yr, acc_[k].imag() + b * yi);
      next[k] = cplx(base[k].real() + a * yr, base[k].imag() + a * yi);
    }
    const cplx y0(-wg_ * xci, wg_ * xcr);
    const cplx y1(-si, sr);
    acc_[0] = first ? b * y0 : acc_[0] + b * y0;
    acc_[1] = first ? b * y1 : acc_[1] + b * y1;
    next[0] = base[0] + a * y0;
    next[1] = base[1] + a * y1;
  }

  double finish(std::span<cplx> c, double h) {
    const auto& x = stage_;
    const double w = h / 6.0;
    const double xcr = x[1].real(), xci = x[1].imag();
    double sr = wg_ * x[0].real(), si = wg_ * x[0].imag();
    double bath = 0.0;
    for (std::size_t j = 0; j < g_.size(); ++j) {
      const std::size_t k = j + 2;
      const double xr = x[k].real(), xi = x[k].imag();
      sr += g_[j] * xr;
      si += g_[j] * xi;
      const double mr = g_[j] * xcr + d_[j] * xr;
      const double mi = g_[j] * xci + d_[j] * xi;
      const double cr = c[k].real() + w * (acc_[k].real() - mi);
      const double ci = c[k].imag() + w * (acc_[k].imag() + mr);
      c[k] = cplx(cr, ci);
      bath += cr * cr + ci * ci;
    }
    const cplx y0(-wg_ * xci, wg_ * xcr);
    const cplx y1(-si, sr);
    c[0] += w * (acc_[0] + y0);
    c[1] += w * (acc_[1] + y1);
    return bath;
  }

  double wg_;
  std::span<const double> g_;
  std::span<const double> d_;
  std::size_t n_;
  std::vector<cplx> stage_;
  std::vector<cplx> acc_;
};

}  // namespace

Trajectory integrate(const WaveFunction& state0, const PhysicalParams& params,
                     const ModeGrid& grid, double t_end, double dt,
                     const IntegrateOptions& options) {
  if (state0.size() != grid.size() + 2) {
    throw Error(ErrorCategory::structural, "dynamics", "state",
                "initial state has " + std::to_string(state0.size()) +
                    " amplitudes, grid needs " + std::to_string(grid.size() + 2));
  }
  const double norm0 = state0.norm_squared();
  if (std::abs(norm0 - 1.0) > 1e-9) {
    throw Error(ErrorCategory::structural, "dynamics", "state",
                "initial state is not normalized (norm^2 = " +
                    std::to_string(norm0) + ")");
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorCategory::step_size, "dynamics", "t_end",
                "t_end must be finite and non-negative");
  }
  const double dt_max = max_time_step(params, grid);
  if (!(dt > 0.0) || dt > dt_max) {
    std::ostringstream os;
    os << "time step dt = " << dt << " outside (0, 0.05/max(W, omega_g, kappa)] = (0, "
       << dt_max << "]";
    throw Error(ErrorCategory::step_size, "dynamics", "dt", os.str());
  }

  const Generator m(params, grid);
  const auto steps = t_end > 0.0
                         ? static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9))
                         : std::size_t{0};
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : dt;

  Trajectory traj;
  traj.dt = h;
  traj.times.reserve(steps + 1);
  traj.p_e.reserve(steps + 1);
  traj.p_c.reserve(steps + 1);
  traj.p_bath.reserve(steps + 1);

  WaveFunction state = state0;
  auto amp = state.amplitudes();
  const double energy0 = m.expectation(amp);

  auto record = [&](std::size_t k, double bath) {
    const double pe = std::norm(amp[0]);
    const double pc = std::norm(amp[1]);
    traj.times.push_back(k == steps ? t_end : static_cast<double>(k) * h);
    traj.p_e.push_back(pe);
    traj.p_c.push_back(pc);
    traj.p_bath.push_back(bath);
    traj.max_sum_defect = std::max(traj.max_sum_defect, std::abs(pe + pc + bath - 1.0));
    if (options.snapshot_stride > 0 && k % options.snapshot_stride == 0) {
      traj.snapshot_times.push_back(traj.times.back());
      traj.snapshots.push_back(state);
    }
  };

  record(0, state0.p_bath());
  Rk4Stepper stepper(m);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double bath = stepper.step(amp, h);
    record(k, bath);
  }

  traj.norm_drift = std::abs(state.norm_squared() - norm0);
  traj.energy_drift = std::abs(m.expectation(amp) - energy0);
  traj.final_state = std::move(state);

  if (traj.norm_drift > 1e-6) {
    std::ostringstream os;
    os << "norm drift " << traj.norm_drift << " over the run exceeds 1e-6";
    throw Error(ErrorCategory::integration_diagnostic, "dynamics", "dt", os.str());
  }
  if (t_end > 0.0 && traj.norm_drift / t_end > 1e-9) {
    std::ostringstream os;
    os << "norm drift rate " << traj.norm_drift / t_end
       << " per unit time exceeds 1e-9; reduce dt";
    throw Error(ErrorCategory::integration_diagnostic, "dynamics", "dt", os.str());
  }
  return traj;
}

WaveFunction perturb_stationary(const DarkState& dark, cplx delta_cc,
                                std::optional<double> delta_ce_phase) {
  const cplx ce0 = dark.psi.ce();
  const cplx cc0 = dark.psi.cc();
  const double alpha = std::abs(cc0);
  if (!(std::abs(delta_cc) < alpha)) {
    throw Error(ErrorCategory::perturbation_domain, "dynamics", "delta_cc",
                "|delta_cc| must be smaller than alpha");
  }

  const cplx cc = cc0 + delta_cc;
  const double budget = std::norm(ce0) + std::norm(cc0) - std::norm(cc);
  // |ce0 + r·u|² = budget with |u| = 1:  r² + 2r·Re(conj(ce0)·u) + |ce0|² − budget = 0.
  const cplx u = std::polar(1.0, delta_ce_phase.value_or(std::arg(ce0)));
  const double b = std::real(std::conj(ce0) * u);
  const double c = std::norm(ce0) - budget;
  const double disc = b * b - c;
  if (budget < 0.0 || disc < 0.0) {
    throw Error(ErrorCategory::perturbation_domain, "dynamics", "delta_cc",
                "no emitter amplitude restores the two-level probability");
  }
  // Roots −b ± sqrt(disc); pick the smaller magnitude in a cancellation-free way.
  const double q = -(b + std::copysign(std::sqrt(disc), b));
  double r = 0.0;
  if (q != 0.0) {
    const double r1 = q;
    const double r2 = c / q;
    r = std::abs(r1) < std::abs(r2) ? r1 : r2;
  }

  WaveFunction out = dark.psi;
  out.cc() = cc;
  out.ce() = ce0 + r * u;
  return out;
}

}  // namespace qfb
