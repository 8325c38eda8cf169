#ifndef CHRONON_TYPES_HPP
#define CHRONON_TYPES_HPP

#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Core>

namespace chronon {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3c = Eigen::Matrix3cd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Complex evolution parameter s = −i(t + iv) in units ħ = 1, i.e. s = v − i t.
struct ComplexTime {
  double t = 0.0;  ///< laboratory time
  double v = 0.0;  ///< imaginary-time component

  [[nodiscard]] Complex s() const { return {v, -t}; }
};

enum class CaseTag { A, B, General };

/// The (δs, λ) pair of a discrete derivative together with its case label.
///
/// Case a: λ = δs = τ1 (real). Case b: δs = −iτ0, λ = 2δs. General: any λ ≠ 0.
/// Construct through the factories so the invariants hold.
class StepSpec {
 public:
  static StepSpec case_a(double tau1);
  static StepSpec case_b(double tau0);
  static StepSpec general(Complex lambda, Complex delta_s);
  /// τ = 0 limit of case a (ordinary continuous evolution, E_D = E).
  static StepSpec continuum() { return StepSpec{CaseTag::A, 0.0, {0.0, 0.0}, {0.0, 0.0}}; }

  [[nodiscard]] CaseTag tag() const { return tag_; }
  /// τ1 for case a, τ0 for case b, |λ| for general schemes.
  [[nodiscard]] double tau() const { return tau_; }
  [[nodiscard]] Complex lambda() const { return lambda_; }
  [[nodiscard]] Complex delta_s() const { return delta_s_; }
  [[nodiscard]] bool is_continuum() const { return tag_ == CaseTag::A && tau_ == 0.0; }

 private:
  StepSpec(CaseTag tag, double tau, Complex lambda, Complex delta_s)
      : tag_(tag), tau_(tau), lambda_(lambda), delta_s_(delta_s) {}

  CaseTag tag_;
  double tau_;
  Complex lambda_;
  Complex delta_s_;
};

std::string to_string(CaseTag tag);

/// Momentum, mass and all derived dispersion quantities at one point.
struct KinematicPoint {
  Vec3 p = Vec3::Zero();
  double m = 0.0;
  double E = 0.0;
  Complex E_D{0.0, 0.0};
  Vec3 v = Vec3::Zero();
  double g = 1.0;
};

/// Stationary mode e^{sε} u_E; alpha is an opaque label for the quantum numbers.
struct StationaryMode {
  std::size_t alpha = 0;
  Complex epsilon{0.0, 0.0};
  double energy = 0.0;

  [[nodiscard]] double epsilon_r() const { return epsilon.real(); }
  [[nodiscard]] double epsilon_i() const { return epsilon.imag(); }
};

}  // namespace chronon

#endif  // CHRONON_TYPES_HPP
