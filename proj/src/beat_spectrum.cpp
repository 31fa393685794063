#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>

#include "qfb/dynamics.hpp"
#include "qfb/error.hpp"

namespace qfb {

const SpectralPeak& BeatSpectrum::dominant() const {
  if (peaks.empty())
    throw Error(ErrorCategory::analysis, "dynamics", "beat_spectrum",
                "spectrum has no peaks");
  return *std::max_element(peaks.begin(), peaks.end(),
                           [](const SpectralPeak& a, const SpectralPeak& b) {
                             return a.power < b.power;
                           });
}

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

std::vector<double> power_spectrum(const std::vector<double>& signal,
                                   std::size_t nfft) {
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(nfft));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(nfft / 2 + 1));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(nfft), in.get(), out.get(),
                                FFTW_ESTIMATE);
  }
  std::fill_n(in.get(), nfft, 0.0);
  std::copy(signal.begin(), signal.end(), in.get());
  fftw_execute(plan);
  std::vector<double> p(nfft / 2 + 1);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double re = out.get()[k][0], im = out.get()[k][1];
    p[k] = re * re + im * im;
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return p;
}

}  // namespace

BeatSpectrum beat_spectrum(const Trajectory& traj, double omega_g,
                           const BeatOptions& options) {
  auto fail = [](const std::string& msg) {
    return Error(ErrorCategory::analysis, "dynamics", "trajectory", msg);
  };
  const std::size_t n = traj.size();
  if (n < 64 || traj.p_c.size() != n)
    throw fail("beat spectrum needs at least 64 samples, got " + std::to_string(n));

  const double t_span = traj.times.back() - traj.times.front();
  const double h = t_span / static_cast<double>(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    const double dtk = traj.times[k] - traj.times[k - 1];
    if (std::abs(dtk - h) > 1e-6 * h)
      throw fail("trajectory is not uniformly sampled");
  }
  const double t_min = 20.0 * two_pi / omega_g;
  if (t_span < t_min * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "trajectory span " << t_span << " is shorter than 20 Rabi periods ("
       << t_min << ")";
    throw fail(os.str());
  }

  double mean = 0.0;
  for (double v : traj.p_c) mean += v;
  mean /= static_cast<double>(n);

  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(k) /
                                           static_cast<double>(n - 1));
    x[k] = w * (traj.p_c[k] - mean);
  }

  // Zero-pad to at least 4n so parabolic interpolation works on a fine grid.
  std::size_t nfft = 1;
  while (nfft < 4 * n) nfft <<= 1;
  const std::vector<double> p = power_spectrum(x, nfft);

  BeatSpectrum out;
  out.resolution = two_pi / t_span;
  const double bin = two_pi / (h * static_cast<double>(nfft));

  const double pmax = *std::max_element(p.begin() + 1, p.end());
  // A constant trajectory leaves only rounding noise after mean removal.
  double scale = 0.0;
  for (double v : traj.p_c) scale = std::max(scale, std::abs(v));
  const double noise = 1e-24 * scale * scale * static_cast<double>(n) * static_cast<double>(n);
  if (!(pmax > noise)) return out;

  const double floor = options.relative_threshold * pmax;
  for (std::size_t k = 1; k + 1 < p.size(); ++k) {
    if (!(p[k] >= floor && p[k] > p[k - 1] && p[k] >= p[k + 1])) continue;
    double offset = 0.0;
    double power = p[k];
    if (p[k - 1] > 0.0 && p[k + 1] > 0.0) {
      const double a = std::log(p[k - 1]), b = std::log(p[k]), c = std::log(p[k + 1]);
      const double denom = a - 2.0 * b + c;
      if (denom < 0.0) {
        offset = 0.5 * (a - c) / denom;
        power = std::exp(b - 0.25 * (a - c) * offset);
      }
    }
    const double f = (static_cast<double>(k) + offset) * bin;
    if (f < out.resolution) continue;
    if (options.max_frequency > 0.0 && f > options.max_frequency) continue;
    out.peaks.push_back({f, power});
  }
  return out;
}

}  // namespace qfb
