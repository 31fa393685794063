#include "qfb/arrowhead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qfb/error.hpp"

namespace qfb {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

struct Spoke {
  double d;
  double z;
};

}  // namespace

double arrowhead_deflation_tolerance(double a, std::span<const double> d,
                                     std::span<const double> z) {
  double znorm2 = 0.0;
  double dmax = std::abs(a);
  for (std::size_t k = 0; k < d.size(); ++k) {
    znorm2 += z[k] * z[k];
    dmax = std::max(dmax, std::abs(d[k]));
  }
  return 2.0 * eps * std::max(dmax, std::sqrt(znorm2));
}

ArrowheadEigen arrowhead_eigen(double a, std::span<const double> d,
                               std::span<const double> z) {
  if (d.size() != z.size())
    throw Error(ErrorCategory::structural, "stability", "arrowhead",
                "diagonal and spoke arrays differ in length");

  double znorm2 = 0.0;
  for (double zk : z) znorm2 += zk * zk;
  const double tol = arrowhead_deflation_tolerance(a, d, z);

  ArrowheadEigen out;
  std::vector<double> vals;
  std::vector<double> wts;
  std::vector<double> org, sh;
  vals.reserve(d.size() + 1);
  wts.reserve(d.size() + 1);

  // Deflate negligible spokes: (d_k, e_k) is then an eigenpair to within |z_k|.
  std::vector<Spoke> spokes;
  spokes.reserve(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (std::abs(z[k]) <= tol) {
      vals.push_back(d[k]);
      wts.push_back(0.0);
      org.push_back(d[k]);
      sh.push_back(0.0);
      ++out.deflated;
    } else {
      spokes.push_back({d[k], z[k]});
    }
  }
  std::sort(spokes.begin(), spokes.end(),
            [](const Spoke& x, const Spoke& y) { return x.d < y.d; });

  // Merge coincident poles with a Givens rotation; the rotated-away
  // combination is an eigenvector with no head component.
  std::vector<Spoke> active;
  active.reserve(spokes.size());
  for (const Spoke& s : spokes) {
    if (!active.empty() && s.d - active.back().d <= tol) {
      active.back().z = std::hypot(active.back().z, s.z);
      vals.push_back(s.d);
      wts.push_back(0.0);
      org.push_back(s.d);
      sh.push_back(0.0);
      ++out.deflated;
    } else {
      active.push_back(s);
    }
  }

  const std::size_t m = active.size();
  if (m == 0) {
    vals.push_back(a);
    wts.push_back(1.0);
    org.push_back(a);
    sh.push_back(0.0);
  } else {
    const double radius = std::sqrt(znorm2);
    const double lo_bound = std::min(a, active.front().d) - radius - tol;
    const double hi_bound = std::max(a, active.back().d) + radius + tol;

    auto eval = [&](double origin, double sigma, double& f, double& fp) {
      double s = 0.0, sp = 0.0;
      for (const Spoke& k : active) {
        const double q = k.z / (sigma - (k.d - origin));
        s += q * k.z;
        sp += q * q;
      }
      f = (origin - a) + sigma - s;
      fp = 1.0 + sp;
    };

    // Root in (origin + lo, origin + hi), f(lo) < 0 < f(hi).
    auto solve = [&](double origin, double lo, double hi) {
      double sigma = 0.5 * (lo + hi);
      double f = 0.0, fp = 1.0;
      for (int it = 0; it < 200; ++it) {
        eval(origin, sigma, f, fp);
        if (f == 0.0) break;
        if (f > 0.0) hi = sigma; else lo = sigma;
        double next = sigma - f / fp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double width = 4.0 * eps * std::max(std::abs(lo), std::abs(hi));
        if (hi - lo <= width || std::abs(next - sigma) <= width) {
          sigma = next;
          eval(origin, sigma, f, fp);
          break;
        }
        sigma = next;
      }
      vals.push_back(origin + sigma);
      org.push_back(origin);
      sh.push_back(sigma);
      const double w = 1.0 / fp;
      wts.push_back(w);
      out.max_residual = std::max(out.max_residual, std::abs(f) * std::sqrt(w));
    };

    solve(active.front().d, lo_bound - active.front().d, 0.0);
    for (std::size_t k = 0; k + 1 < m; ++k) {
      const double gap = active[k + 1].d - active[k].d;
      double f = 0.0, fp = 1.0;
      eval(active[k].d, 0.5 * gap, f, fp);
      if (f >= 0.0)
        solve(active[k].d, 0.0, 0.5 * gap);
      else
        solve(active[k + 1].d, -0.5 * gap, 0.0);
    }
    solve(active.back().d, 0.0, hi_bound - active.back().d);
  }

  std::vector<std::size_t> order(vals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return vals[x] < vals[y]; });
  out.values.resize(vals.size());
  out.head_weights.resize(vals.size());
  out.origins.resize(vals.size());
  out.shifts.resize(vals.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.values[k] = vals[order[k]];
    out.head_weights[k] = wts[order[k]];
    out.origins[k] = org[order[k]];
    out.shifts[k] = sh[order[k]];
  }
  if (!std::all_of(out.values.begin(), out.values.end(),
                   [](double v) { return std::isfinite(v); }))
    throw Error(ErrorCategory::numerical, "stability", "eigenmodes",
                "secular solver produced a non-finite eigenvalue");
  return out;
}

}  // namespace qfb
