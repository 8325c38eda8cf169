#ifndef CHRONON_ALGEBRA_HPP
#define CHRONON_ALGEBRA_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "chronon/types.hpp"
#include "chronon/wavepacket.hpp"

// Operator identities of the deformed canonical pair (q̂_j = i∂/∂p_j, p̂_j = g(E) p_j) for the
// free particle, in the momentum representation with ħ = c = 1.

namespace chronon {

using Vec3c = Eigen::Vector3cd;

/// ψ(p) = N exp(−|p − c|²/(4σ²) − i x0·p), normalized in R³, with an exact gradient.
class GaussianTestState3D {
 public:
  GaussianTestState3D(const Vec3& center, double sigma, const Vec3& displacement = Vec3::Zero());

  [[nodiscard]] Complex value(const Vec3& p) const;
  [[nodiscard]] Vec3c gradient(const Vec3& p) const;
  [[nodiscard]] double normalization() const { return norm_; }
  [[nodiscard]] const Vec3& center() const { return center_; }
  [[nodiscard]] double sigma() const { return sigma_; }

  /// max |gradient − central difference| at p (relative to |ψ(p)|).
  [[nodiscard]] double self_check(const Vec3& p, double h = 1e-5) const;

 private:
  Vec3 center_;
  double sigma_;
  Vec3 displacement_;
  double norm_;
};

/// i(g δ_ij + g′ p_i p_j / E): the commutator as the p-gradient of g(E(p)) p_j.
Mat3c commutator_qp_closed(const StepSpec& spec, const Vec3& p, double m);

/// The same commutator in factored closed form per case (second algebraic route).
Mat3c commutator_qp_factored(const StepSpec& spec, const Vec3& p, double m);

/// ([q̂_i, p̂_j]ψ)(p)/ψ(p) from Richardson-differenced p̂_jψ and the analytic ∇ψ.
Mat3c commutator_qp_numeric(const StepSpec& spec, const Vec3& p, double m,
                            const GaussianTestState3D& test);

/// Truncated small-τ expansions (O(τ1) for case a, O(τ0²) for case b).
Mat3c commutator_expansion(const StepSpec& spec, const Vec3& p, double m);

/// max |[q̂_i, q̂_j]ψ/ψ|, |[p̂_i, p̂_j]ψ/ψ| over i, j.
double commutator_null_checks(const StepSpec& spec, const Vec3& p, double m,
                              const GaussianTestState3D& test);

/// Observed order of ‖closed − expansion‖ under τ-halving, starting at tau_start.
double expansion_order_fit(CaseTag tag, double tau_start, int halvings, const Vec3& p, double m);

struct CommutatorReport {
  CaseTag tag = CaseTag::A;
  Vec3 p = Vec3::Zero();
  double m = 0.0;
  double tau = 0.0;
  Mat3c closed_form = Mat3c::Zero();
  Mat3c numeric = Mat3c::Zero();
  Mat3c expansion = Mat3c::Zero();
  double max_abs_residual = 0.0;     ///< closed vs numeric
  double expansion_order_fit = 0.0;  ///< 6 halvings from the report τ
};

CommutatorReport commutator_report(const StepSpec& spec, const Vec3& p, double m,
                                   const GaussianTestState3D& test);

/// ([H_D, s] f)(s)/f(s) for f = e^{sE} with the forward difference λ = δs = τ1, evaluated at
/// `probe`. Equals e^{τ1 E} = 1 + τ1 E_D.
Complex time_energy_commutator(double E, double tau1, Complex probe = {0.25, -0.5});

/// |⟨φ|O ψ⟩ − ⟨ψ|O φ⟩*| for O = E_D(H) on the grid with inner product Σ φ*ψ dp.
double hermiticity_residual(const StepSpec& spec, double m, const MomentumGrid& grid,
                            const PacketState& phi, const PacketState& psi);

}  // namespace chronon

#endif  // CHRONON_ALGEBRA_HPP
