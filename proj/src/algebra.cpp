#include "chronon/algebra.hpp"

#include <array>
#include <cmath>

#include "chronon/difference_calculus.hpp"
#include "chronon/dispersion.hpp"
#include "chronon/errors.hpp"
#include "chronon/numerics.hpp"

namespace chronon {
namespace {

constexpr std::array<double, 3> kSweep{1e-2, 1e-3, 1e-4};
constexpr double kProbeFloor = 1e-30;
constexpr Complex kI{0.0, 1.0};

double energy_at(const Vec3& p, double m) {
  const double E = rel_energy(p.norm(), m);
  if (E == 0.0) throw DomainError("commutator: E = 0 at the probe point");
  return E;
}

void require_case(const StepSpec& spec, const char* who) {
  if (spec.tag() == CaseTag::General) {
    throw UsageError(std::string(who) + ": defined for case a/b schemes only");
  }
}

double max_abs(const Mat3c& a) { return a.cwiseAbs().maxCoeff(); }

StepSpec spec_for(CaseTag tag, double tau) {
  return tag == CaseTag::A ? StepSpec::case_a(tau) : StepSpec::case_b(tau);
}

}  // namespace

GaussianTestState3D::GaussianTestState3D(const Vec3& center, double sigma, const Vec3& displacement)
    : center_(center), sigma_(sigma), displacement_(displacement) {
  if (!(sigma > 0.0)) throw DomainError("GaussianTestState3D: sigma must be positive");
  norm_ = std::pow(2.0 * kPi * sigma * sigma, -0.75);
}

Complex GaussianTestState3D::value(const Vec3& p) const {
  const double r2 = (p - center_).squaredNorm();
  return norm_ * std::exp(Complex{-r2 / (4.0 * sigma_ * sigma_), -displacement_.dot(p)});
}

Vec3c GaussianTestState3D::gradient(const Vec3& p) const {
  const Complex psi = value(p);
  Vec3c g;
  for (int i = 0; i < 3; ++i) {
    g[i] = psi * Complex{-(p[i] - center_[i]) / (2.0 * sigma_ * sigma_), -displacement_[i]};
  }
  return g;
}

double GaussianTestState3D::self_check(const Vec3& p, double h) const {
  const Vec3c exact = gradient(p);
  const double scale = std::abs(value(p));
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    Vec3 step = Vec3::Zero();
    step[i] = h;
    const Complex fd = (value(p + step) - value(p - step)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - exact[i]) / scale);
  }
  return worst;
}

Mat3c commutator_qp_closed(const StepSpec& spec, const Vec3& p, double m) {
  require_case(spec, "commutator_qp_closed");
  const double E = energy_at(p, m);
  const double g = canonical_factor(spec, E);
  const double dg = canonical_factor_slope(spec, E);
  Mat3c c;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double diag = i == j ? g : 0.0;
      c(i, j) = kI * (diag + dg * (p[i] * p[j]) / E);
    }
  }
  return c;
}

Mat3c commutator_qp_factored(const StepSpec& spec, const Vec3& p, double m) {
  require_case(spec, "commutator_qp_factored");
  const double E = energy_at(p, m);
  const double tau = spec.tau();
  double diag = 1.0;
  double cross = 0.0;  // coefficient of p_i p_j / E²
  if (spec.tag() == CaseTag::A) {
    const double ed = ed_case_a(E, tau);
    const double growth = 1.0 + tau * ed;
    diag = growth * ed / E;
    cross = growth * (1.0 - (1.0 - 2.0 * tau * E) * ed / E);
  } else {
    const double x = 2.0 * tau * E;
    const double sinc = std::sin(x) / x;
    diag = sinc;
    cross = std::cos(x) - sinc;
  }
  Mat3c c;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      c(i, j) = kI * ((i == j ? diag : 0.0) + cross * (p[i] * p[j]) / (E * E));
    }
  }
  return c;
}

Mat3c commutator_qp_numeric(const StepSpec& spec, const Vec3& p, double m,
                            const GaussianTestState3D& test) {
  require_case(spec, "commutator_qp_numeric");
  const Complex psi = test.value(p);
  if (std::abs(psi) < kProbeFloor) {
    throw ProbeError("commutator_qp_numeric: test state vanishes at the probe point");
  }
  const Vec3c grad = test.gradient(p);
  const double g = canonical_factor(spec, energy_at(p, m));
  Mat3c c;
  for (int j = 0; j < 3; ++j) {
    auto p_hat_psi = [&](const Vec3& q) {
      return canonical_factor(spec, energy_at(q, m)) * q[j] * test.value(q);
    };
    for (int i = 0; i < 3; ++i) {
      auto along = [&](double h) {
        Vec3 q = p;
        q[i] += h;
        return p_hat_psi(q);
      };
      const Complex d = numerics::swept_derivative(along, kSweep).value;
      // q̂_i p̂_j ψ − p̂_j q̂_i ψ
      c(i, j) = (kI * d - g * p[j] * kI * grad[i]) / psi;
    }
  }
  return c;
}

Mat3c commutator_expansion(const StepSpec& spec, const Vec3& p, double m) {
  require_case(spec, "commutator_expansion");
  const double E = energy_at(p, m);
  const double tau = spec.tau();
  double diag = 1.0;
  double cross = 0.0;  // coefficient of p_i p_j
  if (spec.tag() == CaseTag::A) {
    const double ed = ed_case_a(E, tau);
    if (ed == 0.0) throw ProbeError("commutator_expansion: H_D^{-1} term singular (E_D = 0)");
    diag = 1.0 + 1.5 * tau * ed;
    cross = 1.5 * tau / ed;
  } else {
    const double ed = ed_case_b(E, tau);
    diag = 1.0 - (2.0 / 3.0) * tau * tau * ed * ed;
    cross = -(4.0 / 3.0) * tau * tau;
  }
  Mat3c c;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      c(i, j) = kI * ((i == j ? diag : 0.0) + cross * (p[i] * p[j]));
    }
  }
  return c;
}

double commutator_null_checks(const StepSpec& spec, const Vec3& p, double m,
                              const GaussianTestState3D& test) {
  require_case(spec, "commutator_null_checks");
  const Complex psi = test.value(p);
  if (std::abs(psi) < kProbeFloor) {
    throw ProbeError("commutator_null_checks: test state vanishes at the probe point");
  }
  // ∂_i(∂_j ψ) by Richardson differences of the analytic gradient.
  Mat3c hess;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      auto along = [&](double h) {
        Vec3 q = p;
        q[i] += h;
        return test.gradient(q)[j];
      };
      hess(i, j) = numerics::swept_derivative(along, kSweep).value;
    }
  }
  const double g = canonical_factor(spec, energy_at(p, m));
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // [q̂_i, q̂_j] = −(∂_i∂_j − ∂_j∂_i)
      const Complex qq = -(hess(i, j) - hess(j, i)) / psi;
      const Complex pp = ((g * p[i]) * ((g * p[j]) * psi) - (g * p[j]) * ((g * p[i]) * psi)) / psi;
      worst = std::max({worst, std::abs(qq), std::abs(pp)});
    }
  }
  return worst;
}

double expansion_order_fit(CaseTag tag, double tau_start, int halvings, const Vec3& p, double m) {
  if (tag == CaseTag::General) throw UsageError("expansion_order_fit: case a/b only");
  if (halvings < 1) throw UsageError("expansion_order_fit: need >= 1 halving");
  std::vector<double> taus;
  std::vector<double> residuals;
  double tau = tau_start;
  for (int k = 0; k <= halvings; ++k, tau *= 0.5) {
    const StepSpec spec = spec_for(tag, tau);
    taus.push_back(tau);
    residuals.push_back(max_abs(commutator_qp_closed(spec, p, m) - commutator_expansion(spec, p, m)));
  }
  return numerics::fit_order(taus, residuals);
}

CommutatorReport commutator_report(const StepSpec& spec, const Vec3& p, double m,
                                   const GaussianTestState3D& test) {
  CommutatorReport r;
  r.tag = spec.tag();
  r.p = p;
  r.m = m;
  r.tau = spec.tau();
  r.closed_form = commutator_qp_closed(spec, p, m);
  r.numeric = commutator_qp_numeric(spec, p, m, test);
  r.expansion = commutator_expansion(spec, p, m);
  r.max_abs_residual = max_abs(r.closed_form - r.numeric);
  if (spec.tau() > 0.0) r.expansion_order_fit = expansion_order_fit(spec.tag(), spec.tau(), 6, p, m);
  return r;
}

Complex time_energy_commutator(double E, double tau1, Complex probe) {
  const Complex step{tau1, 0.0};
  auto wave = [E](Complex s) { return std::exp(s * E); };
  auto weighted = [&](Complex s) { return s * wave(s); };
  const Complex hd_of_sf = apply_delta(weighted, probe, step, step);
  const Complex s_hd_f = probe * apply_delta(wave, probe, step, step);
  return (hd_of_sf - s_hd_f) / wave(probe);
}

double hermiticity_residual(const StepSpec& spec, double m, const MomentumGrid& grid,
                            const PacketState& phi, const PacketState& psi) {
  if (!(phi.grid == grid) || !(psi.grid == grid)) {
    throw UsageError("hermiticity_residual: states live on different grids");
  }
  const Eigen::ArrayXd E = grid.energies(m);
  Eigen::ArrayXcd symbol(E.size());
  for (Eigen::Index k = 0; k < E.size(); ++k) symbol[k] = deformed_energy(spec, E[k]);
  const Eigen::ArrayXcd a = phi.amps.conjugate() * (symbol * psi.amps);
  const Eigen::ArrayXcd b = psi.amps.conjugate() * (symbol * phi.amps);
  const auto n = static_cast<std::size_t>(a.size());
  const Complex lhs = numerics::pairwise_sum(std::span<const Complex>(a.data(), n)) * grid.dp();
  const Complex rhs = numerics::pairwise_sum(std::span<const Complex>(b.data(), n)) * grid.dp();
  return std::abs(lhs - std::conj(rhs));
}

}  // namespace chronon
