#ifndef CHRONON_WAVEPACKET_HPP
#define CHRONON_WAVEPACKET_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "chronon/types.hpp"

namespace chronon {

/// Uniform periodic 1-D momentum grid p_k = −p_max + k·dp, dp = 2p_max/n, with the conjugate
/// position grid x_j = −L/2 + j·dx, dx = π/p_max, L = n·dx.
class MomentumGrid {
 public:
  MomentumGrid(std::size_t n, double p_max);

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] double p_max() const { return p_max_; }
  [[nodiscard]] double dp() const { return 2.0 * p_max_ / static_cast<double>(n_); }
  [[nodiscard]] double dx() const { return kPi / p_max_; }
  [[nodiscard]] double length() const { return static_cast<double>(n_) * dx(); }
  [[nodiscard]] double momentum(std::size_t k) const { return -p_max_ + static_cast<double>(k) * dp(); }
  [[nodiscard]] double position(std::size_t j) const { return -0.5 * length() + static_cast<double>(j) * dx(); }
  [[nodiscard]] Eigen::ArrayXd momenta() const;
  [[nodiscard]] Eigen::ArrayXd positions() const;
  /// E(p_k) = sqrt(p_k² + m²).
  [[nodiscard]] Eigen::ArrayXd energies(double m) const;

  friend bool operator==(const MomentumGrid&, const MomentumGrid&) = default;

 private:
  std::size_t n_;
  double p_max_;
};

/// Literal forward-difference step: advances the imaginary-time coordinate v by τ1.
struct CaseALiteral {
  double tau1 = 0.0;
};

/// Symmetric-difference two-step recurrence; advances laboratory time by τ0 per step.
struct CaseBLeapfrog {
  double tau0 = 0.0;
};

/// Real-time propagation ψ(t + dt) = exp(−i dt E_D(p)) ψ(t).
struct EffectiveDispersion {
  StepSpec spec = StepSpec::continuum();
  double dt = 0.0;
};

using Scheme = std::variant<CaseALiteral, CaseBLeapfrog, EffectiveDispersion>;

std::string scheme_name(const Scheme& scheme);

struct PacketState {
  MomentumGrid grid;
  Eigen::ArrayXcd amps;
  std::optional<Eigen::ArrayXcd> amps_prev;  ///< leapfrog only, present once step_index >= 1
  std::size_t step_index = 0;
  Scheme scheme = EffectiveDispersion{};
  double m = 0.0;
};

struct TrajectoryRecord {
  std::size_t step = 0;
  double t = 0.0;  ///< elapsed evolution parameter (v for literal case a, t otherwise)
  double norm = 0.0;
  double centroid_x = 0.0;
  double centroid_v = 0.0;
  double front_x = 0.0;
  double cone_fraction = 0.0;
};

struct Trajectory {
  std::string semantics;  ///< scheme_name of the stepping rule
  MomentumGrid grid{4, 1.0};
  double m = 0.0;
  Eigen::ArrayXd initial_density;  ///< |ψ(p)|² at the first record
  std::vector<TrajectoryRecord> records;
};

struct Observables {
  double norm = 0.0;  ///< Σ|ψ|² dp
  double centroid_x = 0.0;
  double spectral_centroid_p = 0.0;  ///< ⟨p⟩
  double spectral_mean_abs_p = 0.0;  ///< ⟨|p|⟩
  double quantile_front_x = 0.0;     ///< 0.999 quantile of |x|
};

/// Momentum ↔ position transform on a fixed grid (owns the FFT plan and buffers).
class PositionTransform {
 public:
  explicit PositionTransform(const MomentumGrid& grid);
  ~PositionTransform();
  PositionTransform(PositionTransform&&) noexcept;
  PositionTransform& operator=(PositionTransform&&) noexcept;

  /// ψ̃(x_j) = (2π)^{-1/2} Σ_k ψ(p_k) e^{i p_k x_j} dp.
  [[nodiscard]] Eigen::ArrayXcd to_position(const Eigen::ArrayXcd& momentum_amps);
  /// Inverse of to_position.
  [[nodiscard]] Eigen::ArrayXcd to_momentum(const Eigen::ArrayXcd& position_amps);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Normalized Gaussian ψ(p) ∝ exp(−(p − p0)²/(4σ²)); requires |p0| + 4σ < p_max.
PacketState gaussian_packet(const MomentumGrid& grid, double p0, double sigma, double m = 0.0,
                            Scheme scheme = EffectiveDispersion{});

/// One literal case-a step: every mode multiplied by exp(τ1 E(p)).
PacketState step_case_a(const PacketState& state, double tau1);

struct EvolveOptions {
  std::size_t record_every = 1;
  bool wrap_guard = true;
};

/// Repeated literal case-a steps with observables recorded along the imaginary-time axis.
Trajectory evolve_case_a(PacketState& state, double tau1, std::size_t steps,
                         const EvolveOptions& options = {});

/// Leapfrog ψ_{n+1} = ψ_{n−1} − 2iτ0 E_D ψ_n, seeded with the physical root.
Trajectory evolve_case_b(PacketState& state, double tau0, std::size_t steps,
                         const EvolveOptions& options = {});

/// Real-time propagation under E_D; refuses schemes whose E_D is not real on the grid.
Trajectory evolve_effective(PacketState& state, const StepSpec& spec, double dt, std::size_t steps,
                            const EvolveOptions& options = {});

Observables observables(const PacketState& state);
Observables observables(const PacketState& state, PositionTransform& transform);

/// Physical characteristic root of the leapfrog recurrence for θ = τ0 E_D:
/// sqrt(1 − θ²) − iθ.
Complex physical_root(double theta);

/// The same root written through the phase x = τ0 E, θ = sin x: |cos x| − i sin x.
/// Avoids the eps/cos x loss of recovering cos x from a rounded θ near x = π/2.
Complex physical_root_at_phase(double x);

/// Closed-form single-mode amplitude factor after `steps` steps of `scheme`.
Complex mode_oracle(double p, double m, const Scheme& scheme, std::size_t steps);

struct LightConeReport {
  double fitted_centroid_speed = 0.0;
  double fitted_front_speed = 0.0;
  double predicted_speed = 0.0;
  double centroid_speed_stderr = 0.0;
  bool superluminal = false;
};

/// Least-squares speeds over the second half of an effective-dispersion trajectory.
LightConeReport light_cone_report(const Trajectory& traj, const StepSpec& spec, double m);

/// Momentum-density average of the 1-D group speed.
double mean_group_speed(const MomentumGrid& grid, const Eigen::ArrayXd& density,
                        const StepSpec& spec, double m);

}  // namespace chronon

#endif  // CHRONON_WAVEPACKET_HPP
