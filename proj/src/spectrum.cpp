#include "qfb/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "qfb/error.hpp"

namespace qfb {

std::string_view to_string(Kernel k) { return k == Kernel::sin ? "sin" : "cos"; }

Kernel parse_kernel(std::string_view s) {
  if (s == "sin") return Kernel::sin;
  if (s == "cos") return Kernel::cos;
  throw Error(ErrorCategory::config, "spectrum", "kernel",
              "kernel must be 'sin' or 'cos', got '" + std::string(s) + "'");
}

CharEqn::CharEqn(const PhysicalParams& params, Kernel kernel)
    : params_(params),
      kernel_(kernel),
      phase_(kernel == Kernel::sin ? params.delta_phi()
                                   : normalize_phase(params.delta_phi() - 0.5 * pi)) {}

double CharEqn::operator()(double omega) const {
  const double u = omega - params_.omega_g();
  const double s = std::sin(omega * params_.tau() - phase_);
  const double wg = params_.omega_g();
  return u * u - params_.kappa() * u * s - wg * wg;
}

double CharEqn::d_omega(double omega) const {
  const double u = omega - params_.omega_g();
  const double x = omega * params_.tau() - phase_;
  const double t = params_.tau();
  return 2.0 * u - params_.kappa() * (std::sin(x) + u * t * std::cos(x));
}

double CharEqn::d2_omega(double omega) const {
  const double u = omega - params_.omega_g();
  const double x = omega * params_.tau() - phase_;
  const double t = params_.tau();
  return 2.0 - params_.kappa() * (2.0 * t * std::cos(x) - u * t * t * std::sin(x));
}

double CharEqn::d_R(double omega) const {
  const double u = omega - params_.omega_g();
  return -2.0 * params_.omega_g() * u * std::sin(omega * params_.tau() - phase_);
}

double CharEqn::d_omega_R(double omega) const {
  const double u = omega - params_.omega_g();
  const double x = omega * params_.tau() - phase_;
  return -2.0 * params_.omega_g() * (std::sin(x) + u * params_.tau() * std::cos(x));
}

double char_fn(const CharEqn& eqn, double omega) { return eqn(omega); }

Window default_window(const PhysicalParams& params) {
  const double wg = params.omega_g();
  const double fsr = two_pi / params.tau();
  return {wg - 4.0 * wg - fsr, wg + 4.0 * wg + fsr};
}

namespace {

double periods(const PhysicalParams& params, Window w) {
  return (w.hi - w.lo) * params.tau() / two_pi;
}

void check_window(Window w) {
  if (!(w.hi > w.lo) || !std::isfinite(w.lo) || !std::isfinite(w.hi))
    throw Error(ErrorCategory::resolution, "spectrum", "window",
                "root window needs finite lo < hi");
}

std::size_t resolve_scan(const CharEqn& eqn, Window w, std::size_t scan_points) {
  check_window(w);
  if (scan_points == 0) return default_scan_points(eqn.params(), w);
  const std::size_t need = min_scan_points(eqn.params(), w);
  if (scan_points < need) {
    std::ostringstream os;
    os << "scan_points = " << scan_points
       << " below 16 per feedback period (need " << need << ")";
    throw Error(ErrorCategory::resolution, "spectrum", "scan_points", os.str());
  }
  return scan_points;
}

double sample_x(Window w, std::size_t i, std::size_t n) {
  if (i + 1 == n) return w.hi;
  return w.lo + (w.hi - w.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

std::size_t min_scan_points(const PhysicalParams& params, Window w) {
  return static_cast<std::size_t>(std::ceil(16.0 * periods(params, w)));
}

std::size_t default_scan_points(const PhysicalParams& params, Window w) {
  return static_cast<std::size_t>(std::ceil(2048.0 * periods(params, w))) + 1;
}

std::size_t count_roots(const CharEqn& eqn, Window window, std::size_t scan_points) {
  const std::size_t n = resolve_scan(eqn, window, scan_points);
  std::size_t count = 0;
  double prev = eqn(sample_x(window, 0, n));
  if (prev == 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    const double cur = eqn(sample_x(window, i, n));
    if (cur == 0.0) ++count;
    else if (prev * cur < 0.0) ++count;
    prev = cur;
  }
  return count;
}

RootSet find_roots(const CharEqn& eqn) {
  return find_roots(eqn, default_window(eqn.params()), 0);
}

RootSet find_roots(const CharEqn& eqn, Window window, std::size_t scan_points) {
  const std::size_t n = resolve_scan(eqn, window, scan_points);
  const double wg = eqn.params().omega_g();
  const double xtol = 1e-12 * wg;

  std::vector<double> x(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = sample_x(window, i, n);
    f[i] = eqn(x[i]);
  }

  RootSet out;
  out.window = window;
  out.scan_points = n;
  out.bracket_resolution = (window.hi - window.lo) / static_cast<double>(n - 1);

  auto polish = [&](double a, double b, double fa) {
    while (b - a > xtol) {
      const double m = 0.5 * (a + b);
      const double fm = eqn(m);
      if (fm == 0.0) return m;
      if ((fm < 0.0) == (fa < 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    double r = 0.5 * (a + b);
    const double fr = eqn(r);
    const double dr = eqn.d_omega(r);
    if (dr != 0.0) {
      const double next = r - fr / dr;
      if (next >= a - xtol && next <= b + xtol && std::abs(eqn(next)) <= std::abs(fr))
        r = next;
    }
    return r;
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (f[i] == 0.0) {
      out.roots.push_back(x[i]);
      continue;
    }
    if (i + 1 < n && f[i] * f[i + 1] < 0.0)
      out.roots.push_back(polish(x[i], x[i + 1], f[i]));
  }

  // Grazing contacts: |f| has a local minimum with no sign change nearby.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (f[i] == 0.0 || f[i - 1] * f[i] <= 0.0 || f[i] * f[i + 1] <= 0.0) continue;
    if (!(std::abs(f[i]) < std::abs(f[i - 1]) && std::abs(f[i]) <= std::abs(f[i + 1])))
      continue;
    double a = x[i - 1], b = x[i + 1];
    double ga = eqn.d_omega(a);
    const double gb = eqn.d_omega(b);
    if (ga * gb > 0.0) continue;
    while (b - a > xtol) {
      const double m = 0.5 * (a + b);
      const double gm = eqn.d_omega(m);
      if ((gm < 0.0) == (ga < 0.0)) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    const double m = 0.5 * (a + b);
    if (std::abs(eqn(m)) < 1e-8 * wg * wg) out.marginal.push_back(m);
  }

  std::sort(out.roots.begin(), out.roots.end());
  for (double r : out.roots)
    out.max_residual = std::max(out.max_residual, std::abs(eqn(r)) / (wg * wg));
  return out;
}

namespace {

struct FoldResult {
  double omega = 0.0;
  double R = 0.0;
  bool converged = false;
};

FoldResult fold_newton(const PhysicalParams& base, Kernel kernel, double omega,
                       double R) {
  FoldResult out{omega, R, false};
  for (int it = 0; it < 60; ++it) {
    if (!(out.R > 0.0)) return out;
    const CharEqn e(base.with_R(out.R), kernel);
    const double f = e(out.omega);
    const double fw = e.d_omega(out.omega);
    const double fww = e.d2_omega(out.omega);
    const double fr = e.d_R(out.omega);
    const double fwr = e.d_omega_R(out.omega);
    const double det = fw * fwr - fr * fww;
    if (det == 0.0) return out;
    const double dw = (-f * fwr + fr * fw) / det;
    const double dR = (-fw * fw + fww * f) / det;
    out.omega += dw;
    out.R += dR;
    if (std::abs(dw) < 1e-13 * base.omega_g() && std::abs(dR) < 1e-14) {
      const CharEqn c(base.with_R(out.R), kernel);
      const double wg2 = base.omega_g() * base.omega_g();
      out.converged = std::abs(c(out.omega)) < 1e-9 * wg2 &&
                      std::abs(c.d_omega(out.omega)) < 1e-9 * base.omega_g();
      return out;
    }
  }
  return out;
}

// f_ω(ω_b, R) = 0 in R at a root ω_b that persists for every R.
FoldResult pitchfork_newton(const PhysicalParams& base, Kernel kernel,
                            double omega, double R) {
  FoldResult out{omega, R, false};
  for (int it = 0; it < 60; ++it) {
    if (!(out.R > 0.0)) return out;
    const CharEqn e(base.with_R(out.R), kernel);
    const double g = e.d_omega(omega);
    const double gr = e.d_omega_R(omega);
    if (gr == 0.0) return out;
    const double dR = -g / gr;
    out.R += dR;
    if (std::abs(dR) < 1e-14) {
      const CharEqn c(base.with_R(out.R), kernel);
      out.converged = std::abs(c(omega)) < 1e-9 * base.omega_g() * base.omega_g();
      return out;
    }
  }
  return out;
}

}  // namespace

CriticalR critical_R(int n, double delta_phi, Kernel kernel,
                     const CriticalOptions& options) {
  const PhysicalParams base = PhysicalParams::make(1.0, n, options.R_baseline, delta_phi);
  const Window window = default_window(base);
  const std::size_t scan = resolve_scan(CharEqn(base, kernel), window, options.scan_points);
  auto count = [&](double R) {
    return count_roots(CharEqn(base.with_R(R), kernel), window, scan);
  };

  CriticalR out;
  out.n = n;
  out.delta_phi = base.delta_phi();
  out.kernel = kernel;
  out.baseline_count = count(options.R_baseline);

  const std::size_t m = std::max<std::size_t>(options.coarse_points, 2);
  const double l0 = std::log(options.R_min), l1 = std::log(options.R_max);
  double lo = 0.0, hi = 0.0;
  std::size_t hi_count = 0;
  bool found = false;
  std::size_t prev_count = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double R = i + 1 == m ? options.R_max
                                : std::exp(l0 + (l1 - l0) * static_cast<double>(i) /
                                                     static_cast<double>(m - 1));
    const std::size_t c = count(R);
    if (i > 0 && c < prev_count) out.monotonicity_violations.push_back(R);
    prev_count = c;
    if (!found) {
      if (c > out.baseline_count) {
        found = true;
        hi = R;
        hi_count = c;
      } else {
        lo = R;
      }
    }
  }
  if (!found) {
    std::ostringstream os;
    os << "root count stays at " << out.baseline_count << " on R in ["
       << options.R_min << ", " << options.R_max << "] for n = " << n
       << ", delta_phi = " << base.delta_phi() << ", kernel = " << to_string(kernel);
    throw Error(ErrorCategory::not_found, "spectrum", "R", os.str());
  }
  if (lo == 0.0) {
    // Already above baseline at R_min: bracket against the baseline R.
    lo = options.R_baseline;
  }

  // Bisect well past the requested tolerance: the emerging pair is then
  // separated by a few scan steps only, which pins down where to start the
  // fold Newton iteration.
  const double stop = 1e-3 * options.tolerance;
  while (hi - lo > stop) {
    const double mid = 0.5 * (lo + hi);
    const std::size_t c = count(mid);
    if (c > out.baseline_count) {
      hi = mid;
      hi_count = c;
    } else {
      lo = mid;
    }
  }
  out.R_lo = lo;
  out.R_hi = hi;
  out.R_bar = 0.5 * (lo + hi);
  out.count_above = hi_count;

  // Locate the emerging pair: roots at R_hi without a partner at R_lo.
  const RootSet before = find_roots(CharEqn(base.with_R(lo), kernel), window, scan);
  const RootSet after = find_roots(CharEqn(base.with_R(hi), kernel), window, scan);
  std::vector<bool> used(after.roots.size(), false);
  for (double r : before.roots) {
    std::size_t best = after.roots.size();
    double dist = 0.0;
    for (std::size_t k = 0; k < after.roots.size(); ++k) {
      if (used[k]) continue;
      const double dd = std::abs(after.roots[k] - r);
      if (best == after.roots.size() || dd < dist) {
        best = k;
        dist = dd;
      }
    }
    if (best < after.roots.size()) used[best] = true;
  }
  std::vector<double> fresh;
  for (std::size_t k = 0; k < after.roots.size(); ++k)
    if (!used[k]) fresh.push_back(after.roots[k]);

  if (!fresh.empty()) {
    // New roots appear in mirror pairs for Δφ ∈ {0, π}; follow the tightest one.
    double a = fresh.front(), b = fresh.front();
    double gap = INFINITY;
    for (std::size_t k = 0; k + 1 < fresh.size(); ++k) {
      if (fresh[k + 1] - fresh[k] < gap) {
        gap = fresh[k + 1] - fresh[k];
        a = fresh[k];
        b = fresh[k + 1];
      }
    }
    double straddled = 0.0;
    for (double r : before.roots)
      if (r > a && r < b) {
        out.pitchfork = true;
        straddled = r;
      }
    const FoldResult fold = out.pitchfork
                                ? pitchfork_newton(base, kernel, straddled, out.R_bar)
                                : fold_newton(base, kernel, 0.5 * (a + b), out.R_bar);
    out.R_fold = fold.R;
    out.omega_fold = fold.omega;
    out.fold_converged = fold.converged;
    out.cross_validated =
        fold.converged && std::abs(fold.R - out.R_bar) <= std::max(5e-4, 2e-3 * out.R_bar);
  }
  return out;
}

std::vector<ProductLawRow> product_law(int n_max, const CriticalOptions& options) {
  if (n_max < 1)
    throw Error(ErrorCategory::parameter_domain, "spectrum", "n_max", "n_max must be >= 1");
  const double target = 1.0 / two_pi;
  std::vector<ProductLawRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    ProductLawRow row;
    row.n = n;
    row.critical = critical_R(n, 0.0, Kernel::sin, options);
    row.product = n * row.critical.R_bar;
    row.rel_error = std::abs(row.product - target) / target;
    row.pass = row.rel_error < 0.02;
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> log2_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo))
    throw Error(ErrorCategory::config, "spectrum", "log2R", "log2R grid needs step > 0 and hi >= lo");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> g(count);
  for (std::size_t k = 0; k < count; ++k) g[k] = lo + static_cast<double>(k) * step;
  return g;
}

std::vector<SweepRow> sweep(int n, double delta_phi, Kernel kernel,
                            const std::vector<double>& log2R,
                            std::optional<Window> window, unsigned threads) {
  const PhysicalParams base = PhysicalParams::make(1.0, n, 1.0, delta_phi);
  const Window w = window.value_or(default_window(base));
  check_window(w);
  const std::size_t scan = default_scan_points(base, w);

  std::vector<SweepRow> rows(log2R.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].log2R = log2R[k];
    rows[k].R = std::exp2(log2R[k]);
    // Validate every R up front so workers never throw.
    (void)base.with_R(rows[k].R);
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < rows.size(); k = next++)
      rows[k].roots = find_roots(CharEqn(base.with_R(rows[k].R), kernel), w, scan);
  };
  unsigned nt = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, rows.size()));
  if (nt <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work);
  }
  return rows;
}

}  // namespace qfb
