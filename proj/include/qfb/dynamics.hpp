#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qfb/grid.hpp"
#include "qfb/params.hpp"
#include "qfb/stationary.hpp"
#include "qfb/wavefunction.hpp"

namespace qfb {

/// dc/dt = i·M·c, the autonomous form of the amplitude equations.
WaveFunction derivative(const WaveFunction& state, const PhysicalParams& params,
                        const ModeGrid& grid);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> p_e;
  std::vector<double> p_c;
  std::vector<double> p_bath;

  std::vector<double> snapshot_times;
  std::vector<WaveFunction> snapshots;

  WaveFunction final_state;
  double dt = 0.0;             ///< step actually used (t_end / steps)
  double norm_drift = 0.0;     ///< |‖c(T)‖² − ‖c(0)‖²|
  double energy_drift = 0.0;   ///< |⟨c,Mc⟩(T) − ⟨c,Mc⟩(0)|
  double max_sum_defect = 0.0; ///< max_t |p_e + p_c + p_bath − 1|

  std::size_t size() const noexcept { return times.size(); }
  double t_end() const noexcept { return times.empty() ? 0.0 : times.back(); }
};

struct IntegrateOptions {
  /// Store a full WaveFunction every `snapshot_stride` steps (0 = never).
  std::size_t snapshot_stride = 0;
};

/// Largest step accepted by integrate: 0.05 / max(W, ω_g, κ).
double max_time_step(const PhysicalParams& params, const ModeGrid& grid);

/// Default step 0.01 / max(W, ω_g, κ); keeps the RK4 norm loss of the
/// fastest bath modes below 1e−9 per unit time.
double default_time_step(const PhysicalParams& params, const ModeGrid& grid);

/// Classical fixed-step RK4 on dc/dt = i·M·c from t = 0 to t_end.
///
/// The step is shrunk to t_end/⌈t_end/dt⌉ so the last sample lands on t_end.
/// Probabilities are recorded at every step.
///
/// Throws Error{step_size} if dt exceeds max_time_step, Error{structural} for
/// a non-normalized or mis-sized initial state, and
/// Error{integration_diagnostic} if the norm drifts by more than 1e−6 over
/// the run or by more than 1e−9 per unit time.
Trajectory integrate(const WaveFunction& state0, const PhysicalParams& params,
                     const ModeGrid& grid, double t_end, double dt,
                     const IntegrateOptions& options = {});

/// Exact propagation c(t) = Σ_k v_k·⟨v_k, c(0)⟩·e^{iμ_k t} through the
/// eigen-expansion of M from the arrowhead secular solver, sampled every
/// t_end/⌈t_end/dt⌉. Costs O(N²) once plus O(N) per sample, independent of
/// the bath bandwidth, so it replaces RK4 where W forces tiny steps.
///
/// p_bath is recorded as 1 − p_e − p_c; norm_drift and energy_drift compare
/// the reconstructed final state with the initial one.
Trajectory propagate_spectral(const WaveFunction& state0, const PhysicalParams& params,
                              const ModeGrid& grid, double t_end, double dt);

/// Adds delta_cc to the cavity amplitude of the dark state and rescales the
/// emitter amplitude so that |c_e|² + |c_c|² keeps its stationary value;
/// bath amplitudes are untouched.
///
/// δc_e = r·e^{iφ_e} with φ_e = arg(c̄_e) unless `delta_ce_phase` is given.
/// Of the two real roots r the one of smaller magnitude is taken.
/// Throws Error{perturbation_domain} if |delta_cc| ≥ α or no real root exists.
WaveFunction perturb_stationary(const DarkState& dark, cplx delta_cc,
                                std::optional<double> delta_ce_phase = {});

struct SpectralPeak {
  double frequency = 0.0;  ///< angular frequency [rad/time]
  double power = 0.0;
};

struct BeatSpectrum {
  std::vector<SpectralPeak> peaks;  ///< ascending frequency
  double resolution = 0.0;          ///< 2π / t_end

  /// Peak of maximal power; throws Error{analysis} if there is none.
  const SpectralPeak& dominant() const;
};

struct BeatOptions {
  /// Keep local maxima with power ≥ threshold · (maximal power).
  double relative_threshold = 1e-2;
  /// Ignore peaks above this angular frequency (≤ 0: no limit).
  double max_frequency = 0.0;
};

/// Hann-windowed DFT of p_c(t) − mean(p_c); peaks located by parabolic
/// interpolation of the log power. Requires uniform sampling, at least 64
/// samples and t_end ≥ 20·2π/ω_g; otherwise Error{analysis}.
BeatSpectrum beat_spectrum(const Trajectory& traj, double omega_g,
                           const BeatOptions& options = {});

}  // namespace qfb
