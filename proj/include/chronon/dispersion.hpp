#ifndef CHRONON_DISPERSION_HPP
#define CHRONON_DISPERSION_HPP

#include <cmath>
#include <complex>
#include <optional>

#include "chronon/errors.hpp"
#include "chronon/types.hpp"

// Deformed spectra of the discrete-time Hamiltonian for a free relativistic particle.
// Natural units ħ = c = 1 throughout. Every operator f(H) acts as multiplication by
// f(E(p)) in the momentum representation, so the maps below are the operator symbols.
//
// The scalar maps are templates on the real (and complex) scalar so the same code runs
// in double and in arbitrary precision (see precision.hpp).

namespace chronon {

/// E = sqrt(p² + m²).
template <typename Real>
Real rel_energy(const Real& p_mag, const Real& m) {
  using std::sqrt;
  if (p_mag < Real(0) || m < Real(0)) throw DomainError("rel_energy: negative momentum or mass");
  return sqrt(p_mag * p_mag + m * m);
}

/// E_D = (2/λ) exp((δs − λ/2)E) sinh(λE/2), the eigenvalue of H_D on u_E.
template <typename Real, typename Cplx>
Cplx ed_general(const Real& E, const Cplx& lambda, const Cplx& delta_s) {
  using std::exp;
  using std::sinh;
  if (lambda == Cplx(0)) throw DomainError("ed_general: lambda must be nonzero");
  const Cplx half = lambda / Real(2);
  return (Real(2) / lambda) * exp((delta_s - half) * E) * sinh(half * E);
}

/// Forward-difference case: (exp(τ1 E) − 1)/τ1. τ1 = 0 yields the limit E.
/// Negative τ1 is accepted and gives damping instead of growth.
template <typename Real>
Real ed_case_a(const Real& E, const Real& tau1) {
  using std::expm1;
  if (tau1 == Real(0)) return E;
  return expm1(tau1 * E) / tau1;
}

/// Symmetric-difference case: sin(τ0 E)/τ0, bounded by 1/τ0.
template <typename Real>
Real ed_case_b(const Real& E, const Real& tau0) {
  using std::sin;
  if (!(tau0 > Real(0))) throw DomainError("ed_case_b: tau0 must be positive");
  return sin(tau0 * E) / tau0;
}

/// Invariant (shifted) mass M = (exp(τ1 m) − 1)/τ1 = m + τ1 m²/2 + O(τ1²).
template <typename Real>
Real mass_shift(const Real& m, const Real& tau1) {
  return ed_case_a(m, tau1);
}

/// dE_D/dE for a general scheme: (δs e^{δs E} − (δs − λ) e^{(δs−λ)E})/λ.
template <typename Real, typename Cplx>
Cplx ed_general_slope(const Real& E, const Cplx& lambda, const Cplx& delta_s) {
  using std::exp;
  if (lambda == Cplx(0)) throw DomainError("ed_general_slope: lambda must be nonzero");
  const Cplx back = delta_s - lambda;
  return (delta_s * exp(delta_s * E) - back * exp(back * E)) / lambda;
}

// Scheme-dispatched forms (double precision).

/// E_D(E) for the scheme; real for case a/b.
Complex deformed_energy(const StepSpec& spec, double E);

/// dE_D/dE for the scheme.
Complex deformed_energy_slope(const StepSpec& spec, double E);

/// Group velocity ∂E_D/∂p: case a e^{τ1E} p/E, case b cos(τ0E) p/E.
/// General schemes use Re(dE_D/dE) p/E. Throws DomainError at E = 0.
Vec3 group_velocity(const StepSpec& spec, const Vec3& p, double m);

/// Signed 1-D group speed along p; 0 at the E = 0 point (used for grid averages).
double group_speed_1d(const StepSpec& spec, double p, double m);

/// g(E) with p̂ = g p: case a (E_D/E) e^{τ1E}, case b sin(2τ0E)/(2τ0E).
/// General schemes use Re(E_D E_D'/E). Throws DomainError for E <= 0.
double canonical_factor(const StepSpec& spec, double E);

/// dg/dE for case a/b.
double canonical_factor_slope(const StepSpec& spec, double E);

/// Smallest p >= 0 where the case-a group speed reaches 1; nullopt if no root was
/// bracketed before the search bound overflowed.
std::optional<double> superluminal_threshold(double m, double tau1);

struct MaxEnergy {
  double E_star = 0.0;
  double E_D_max = 0.0;
};

/// Location and value of the case-b energy ceiling: (π/(2τ0), 1/τ0).
MaxEnergy max_energy_case_b(double tau0);

/// e^{sε}.
Complex stationary_factor(const ComplexTime& s, Complex epsilon);

struct StationarySplit {
  double modulus = 1.0;  ///< e^{tε_I + vε_R}
  double phase = 0.0;    ///< −(tε_R − vε_I)
};

/// Modulus/phase decomposition of e^{sε} computed from the real parts directly.
StationarySplit stationary_split(const ComplexTime& s, Complex epsilon);

/// |Im E_D| for a general (λ, δs) pair.
double reality_residual(double E, Complex lambda, Complex delta_s);

/// Fills every derived field for (p, m) under the scheme.
KinematicPoint kinematic_point(const StepSpec& spec, const Vec3& p, double m);

}  // namespace chronon

#endif  // CHRONON_DISPERSION_HPP
