#include "qfb/stability.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "qfb/arrowhead.hpp"
#include "qfb/error.hpp"

namespace qfb {

std::string_view to_string(EigenMethod m) {
  switch (m) {
    case EigenMethod::automatic: return "auto";
    case EigenMethod::dense: return "dense";
    case EigenMethod::secular: return "secular";
  }
  return "unknown";
}

JacobianOperator JacobianOperator::build(const PhysicalParams& params,
                                         const ModeGrid& grid) {
  JacobianOperator jac(Generator(params, grid));
  const double defect = jac.skew_defect();
  if (defect > 1e-14)
    throw Error(ErrorCategory::structural, "stability", "jacobian",
                "Jacobian is not skew-Hermitian (defect " + std::to_string(defect) + ")");
  return jac;
}

double JacobianOperator::skew_defect() const {
  // Nonzero pattern of J = i·M: (e,c), (c,e), (c,j), (j,c), (j,j).
  const cplx i1(0.0, 1.0);
  auto pair = [&](double upper, double lower) {
    return std::abs(i1 * upper + std::conj(i1 * lower));
  };
  const auto g = generator_.couplings();
  const auto d = generator_.bath_diagonal();
  double worst = pair(generator_.omega_g(), generator_.omega_g());
  for (std::size_t j = 0; j < g.size(); ++j) {
    worst = std::max(worst, pair(g[j], g[j]));
    worst = std::max(worst, pair(d[j], d[j]));
  }
  return worst / generator_.max_abs_entry();
}

namespace {

void dense_solve(const Generator& m, ModeSpectrum& out) {
  const std::size_t n = m.dimension();
  std::vector<double> a = m.dense();
  std::vector<double> w(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U',
                                         static_cast<lapack_int>(n), a.data(),
                                         static_cast<lapack_int>(n), w.data());
  if (info != 0) {
    throw Error(ErrorCategory::numerical, "stability", "eigenmodes",
                "dsyevd failed with info = " + std::to_string(info) +
                    " (dimension " + std::to_string(n) + ", max|M| = " +
                    std::to_string(m.max_abs_entry()) + ")");
  }
  out.mu = std::move(w);
  out.weights.resize(n);
  std::vector<double> mv(n);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::span<const double> v(a.data() + k * n, n);
    out.weights[k] = v[1] * v[1];
    m.apply(v, mv);
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = mv[i] - out.mu[k] * v[i];
      r += e * e;
    }
    worst = std::max(worst, std::sqrt(r));
  }
  out.max_residual = worst / m.max_abs_entry();
}

void secular_solve(const Generator& m, ModeSpectrum& out) {
  // Arrowhead with the cavity as head: spokes are the emitter (diagonal 0,
  // coupling ω_g) and every bath mode.
  const auto g = m.couplings();
  const auto d = m.bath_diagonal();
  std::vector<double> diag(g.size() + 1), spoke(g.size() + 1);
  diag[0] = 0.0;
  spoke[0] = m.omega_g();
  std::copy(d.begin(), d.end(), diag.begin() + 1);
  std::copy(g.begin(), g.end(), spoke.begin() + 1);
  ArrowheadEigen e = arrowhead_eigen(0.0, diag, spoke);
  out.mu = std::move(e.values);
  out.weights = std::move(e.head_weights);
  out.max_residual = e.max_residual / m.max_abs_entry();
}

}  // namespace

ModeSpectrum eigenmodes(const JacobianOperator& jac, EigenMethod method) {
  const Generator& m = jac.generator();
  if (method == EigenMethod::automatic)
    method = m.dimension() <= dense_method_limit ? EigenMethod::dense
                                                 : EigenMethod::secular;
  ModeSpectrum out;
  out.method = method;
  if (method == EigenMethod::dense)
    dense_solve(m, out);
  else
    secular_solve(m, out);

  out.osc.resize(out.mu.size());
  for (std::size_t k = 0; k < out.mu.size(); ++k) {
    out.osc[k] = out.mu[k] + m.omega_g();
    out.max_abs_lambda = std::max(out.max_abs_lambda, std::abs(out.mu[k]));
    out.weight_sum += out.weights[k];
  }
  // λ = i·μ with μ real: the real part vanishes identically.
  out.max_abs_re_lambda = 0.0;
  out.skew_defect = jac.skew_defect();
  return out;
}

std::vector<VisibleMode> visible_modes(const ModeSpectrum& spec,
                                       double weight_threshold, double dedup_tol) {
  if (spec.weights.empty()) return {};
  const double wmax = *std::max_element(spec.weights.begin(), spec.weights.end());
  std::vector<VisibleMode> out;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (spec.weights[k] < weight_threshold * wmax) continue;
    const VisibleMode v{spec.osc[k], spec.weights[k]};
    // osc is ascending, so a cluster only ever grows at its upper end.
    if (!out.empty() && v.osc - out.back().osc <= dedup_tol) {
      if (v.weight > out.back().weight) out.back() = v;
      continue;
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> visible_frequencies(const ModeSpectrum& spec,
                                        double weight_threshold, double dedup_tol) {
  std::vector<double> f;
  for (const VisibleMode& v : visible_modes(spec, weight_threshold, dedup_tol))
    f.push_back(v.osc);
  return f;
}

double symmetry_defect(const std::vector<double>& osc, double omega_g,
                       double half_width) {
  std::vector<double> x;
  for (double w : osc) {
    const double u = w - omega_g;
    if (std::abs(u) <= half_width) x.push_back(u);
  }
  std::sort(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    worst = std::max(worst, std::abs(x[k] + x[x.size() - 1 - k]));
  return worst;
}

}  // namespace qfb
