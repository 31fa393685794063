#include "qfb/generator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qfb/error.hpp"

namespace qfb {

double WaveFunction::norm_squared() const {
  double s = 0.0;
  for (const cplx& a : amp_) s += std::norm(a);
  return s;
}

double WaveFunction::norm() const { return std::sqrt(norm_squared()); }

double WaveFunction::p_bath() const {
  double s = 0.0;
  for (const cplx& a : bath()) s += std::norm(a);
  return s;
}

Generator::Generator(const PhysicalParams& params, const ModeGrid& grid)
    : omega_g_(params.omega_g()),
      coupling_(grid.couplings().begin(), grid.couplings().end()),
      diag_(grid.size()) {
  const auto d = grid.detunings();
  for (std::size_t j = 0; j < d.size(); ++j) diag_[j] = -(omega_g_ + d[j]);
}

namespace {

template <class T>
void apply_impl(double wg, std::span<const double> g,
                std::span<const double> diag, std::span<const T> x,
                std::span<T> y) {
  const std::size_t nb = g.size();
  if (x.size() != nb + 2 || y.size() != nb + 2) {
    throw Error(ErrorCategory::structural, "dynamics", "state",
                "state dimension " + std::to_string(x.size()) +
                    " does not match generator dimension " +
                    std::to_string(nb + 2));
  }
  const T xc = x[1];
  T acc = wg * x[0];
  for (std::size_t j = 0; j < nb; ++j) {
    acc += g[j] * x[j + 2];
    y[j + 2] = g[j] * xc + diag[j] * x[j + 2];
  }
  y[0] = wg * xc;
  y[1] = acc;
}

}  // namespace

void Generator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  apply_impl<cplx>(omega_g_, coupling_, diag_, x, y);
}

void Generator::apply(std::span<const double> x, std::span<double> y) const {
  apply_impl<double>(omega_g_, coupling_, diag_, x, y);
}

double Generator::expectation(std::span<const cplx> x) const {
  std::vector<cplx> y(x.size());
  apply(x, y);
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += std::real(std::conj(x[k]) * y[k]);
  return s;
}

std::vector<double> Generator::dense() const {
  const std::size_t n = dimension();
  std::vector<double> m(n * n, 0.0);
  m[0 * n + 1] = m[1 * n + 0] = omega_g_;
  for (std::size_t j = 0; j < coupling_.size(); ++j) {
    m[1 * n + (j + 2)] = m[(j + 2) * n + 1] = coupling_[j];
    m[(j + 2) * n + (j + 2)] = diag_[j];
  }
  return m;
}

double Generator::max_abs_entry() const {
  double m = std::abs(omega_g_);
  for (double g : coupling_) m = std::max(m, std::abs(g));
  for (double d : diag_) m = std::max(m, std::abs(d));
  return m;
}

}  // namespace qfb
