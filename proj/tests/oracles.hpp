#pragma once

// Reference computations written independently of the library, used as
// oracles by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

struct System {
  double omega_g = 1.0;
  int n = 1;
  double R = 0.5;
  double dphi = 0.0;
  double kappa() const { return 2.0 * R * omega_g; }
  double tau() const { return n * 2.0 * pi / omega_g; }
};

inline double char_eq(const System& s, double w) {
  const double u = w - s.omega_g;
  return u * u - s.kappa() * u * std::sin(w * s.tau() - s.dphi) - s.omega_g * s.omega_g;
}

inline double char_eq_cos(const System& s, double w) {
  const double u = w - s.omega_g;
  return u * u - s.kappa() * u * std::cos(w * s.tau() - s.dphi) - s.omega_g * s.omega_g;
}

inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double tol = 1e-14) {
  double fa = f(a);
  for (int it = 0; it < 400 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

/// All sign changes of f on a uniform scan, bisected.
inline std::vector<double> scan_roots(const std::function<double(double)>& f, double lo,
                                      double hi, std::size_t n) {
  std::vector<double> r;
  double xp = lo, fp = f(lo);
  for (std::size_t i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    const double fx = f(x);
    if (fp == 0.0) r.push_back(xp);
    else if (fp * fx < 0.0) r.push_back(bisect(f, xp, x));
    xp = x;
    fp = fx;
  }
  return r;
}

/// Staggered grid and couplings straight from their definitions.
struct Bath {
  std::vector<double> delta, g;
  double spacing = 0.0;
};

inline Bath make_bath(const System& s, double W, std::size_t P) {
  Bath b;
  b.spacing = W / static_cast<double>(P);
  const double G0 = std::sqrt(2.0 * s.kappa() / pi);
  for (std::size_t k = 0; k < 2 * P; ++k) {
    const double j = static_cast<double>(k) - static_cast<double>(P) + 0.5;
    const double d = j * b.spacing;
    b.delta.push_back(d);
    b.g.push_back(G0 * std::sin((s.dphi + pi) / 2.0 + d * s.tau() / 2.0) * std::sqrt(b.spacing));
  }
  return b;
}

/// RK4 on the original time-dependent equations
///   c_e' = iω_g c_c,  c_c' = iω_g c_e + i Σ G_j(t) c_j,  c_j' = i G_j*(t) c_c
/// with G_j(t) = g_j e^{−i(ω_g+δ_j)t}; returns |c_c(t)|² at each step.
inline std::vector<double> time_dependent_pc(const System& s, const Bath& b,
                                             std::vector<cplx> c, double t_end, double h) {
  const std::size_t nb = b.g.size();
  auto rhs = [&](double t, const std::vector<cplx>& x, std::vector<cplx>& y) {
    const cplx I(0, 1);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < nb; ++j) {
      const cplx G = b.g[j] * std::exp(-I * (s.omega_g + b.delta[j]) * t);
      acc += G * x[j + 2];
      y[j + 2] = I * std::conj(G) * x[1];
    }
    y[0] = I * s.omega_g * x[1];
    y[1] = I * s.omega_g * x[0] + I * acc;
  };
  const auto steps = static_cast<std::size_t>(std::llround(t_end / h));
  std::vector<cplx> k1(c.size()), k2(c.size()), k3(c.size()), k4(c.size()), tmp(c.size());
  std::vector<double> pc{std::norm(c[1])};
  for (std::size_t s_ = 0; s_ < steps; ++s_) {
    const double t = static_cast<double>(s_) * h;
    rhs(t, c, k1);
    for (std::size_t i = 0; i < c.size(); ++i) tmp[i] = c[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < c.size(); ++i) tmp[i] = c[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < c.size(); ++i) tmp[i] = c[i] + h * k3[i];
    rhs(t + h, tmp, k4);
    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    pc.push_back(std::norm(c[1]));
  }
  return pc;
}

/// Cyclic Jacobi eigenvalues of a dense symmetric matrix (row-major), ascending,
/// with the squared component `row` of each eigenvector.
inline void jacobi_eigen(std::vector<double> a, std::size_t n, std::size_t row,
                         std::vector<double>& values, std::vector<double>& weights) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
  }
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return a[x * n + x] < a[y * n + y]; });
  values.clear();
  weights.clear();
  for (std::size_t i : idx) {
    values.push_back(a[i * n + i]);
    weights.push_back(v[row * n + i] * v[row * n + i]);
  }
}

}  // namespace oracle
