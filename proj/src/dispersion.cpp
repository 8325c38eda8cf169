#include "chronon/dispersion.hpp"

#include <cmath>
#include <limits>

#include "chronon/numerics.hpp"

namespace chronon {

StepSpec StepSpec::case_a(double tau1) {
  if (!std::isfinite(tau1) || tau1 == 0.0) {
    throw DomainError("case a: tau1 must be finite and nonzero (use continuum() for tau = 0)");
  }
  return StepSpec{CaseTag::A, tau1, {tau1, 0.0}, {tau1, 0.0}};
}

StepSpec StepSpec::case_b(double tau0) {
  if (!std::isfinite(tau0) || !(tau0 > 0.0)) throw DomainError("case b: tau0 must be positive");
  const Complex ds{0.0, -tau0};
  return StepSpec{CaseTag::B, tau0, 2.0 * ds, ds};
}

StepSpec StepSpec::general(Complex lambda, Complex delta_s) {
  if (lambda == Complex{0.0, 0.0}) throw DomainError("general scheme: lambda must be nonzero");
  return StepSpec{CaseTag::General, std::abs(lambda), lambda, delta_s};
}

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::A:
      return "a";
    case CaseTag::B:
      return "b";
    case CaseTag::General:
      return "general";
  }
  return "?";
}

Complex deformed_energy(const StepSpec& spec, double E) {
  switch (spec.tag()) {
    case CaseTag::A:
      return ed_case_a(E, spec.tau());
    case CaseTag::B:
      return ed_case_b(E, spec.tau());
    case CaseTag::General:
      break;
  }
  return ed_general(E, spec.lambda(), spec.delta_s());
}

Complex deformed_energy_slope(const StepSpec& spec, double E) {
  switch (spec.tag()) {
    case CaseTag::A:
      return std::exp(spec.tau() * E);
    case CaseTag::B:
      return std::cos(spec.tau() * E);
    case CaseTag::General:
      break;
  }
  return ed_general_slope(E, spec.lambda(), spec.delta_s());
}

Vec3 group_velocity(const StepSpec& spec, const Vec3& p, double m) {
  const double E = rel_energy(p.norm(), m);
  if (E == 0.0) throw DomainError("group_velocity: direction undefined at E = 0");
  return deformed_energy_slope(spec, E).real() * p / E;
}

double group_speed_1d(const StepSpec& spec, double p, double m) {
  const double E = rel_energy(std::abs(p), m);
  if (E == 0.0) return 0.0;
  return deformed_energy_slope(spec, E).real() * p / E;
}

double canonical_factor(const StepSpec& spec, double E) {
  if (!(E > 0.0)) throw DomainError("canonical_factor: E must be positive");
  switch (spec.tag()) {
    case CaseTag::A:
      return ed_case_a(E, spec.tau()) / E * std::exp(spec.tau() * E);
    case CaseTag::B: {
      const double x = 2.0 * spec.tau() * E;
      return std::sin(x) / x;
    }
    case CaseTag::General:
      break;
  }
  return (deformed_energy(spec, E) * deformed_energy_slope(spec, E) / E).real();
}

double canonical_factor_slope(const StepSpec& spec, double E) {
  if (!(E > 0.0)) throw DomainError("canonical_factor_slope: E must be positive");
  switch (spec.tag()) {
    case CaseTag::A: {
      const double growth = std::exp(spec.tau() * E);
      const double ed = ed_case_a(E, spec.tau());
      return growth / E * (growth + spec.tau() * ed - ed / E);
    }
    case CaseTag::B: {
      const double x = 2.0 * spec.tau() * E;
      return (std::cos(x) - std::sin(x) / x) / E;
    }
    case CaseTag::General:
      break;
  }
  throw UsageError("canonical_factor_slope: defined for case a/b only");
}

std::optional<double> superluminal_threshold(double m, double tau1) {
  if (!(tau1 > 0.0)) throw DomainError("superluminal_threshold: tau1 must be positive");
  if (m < 0.0) throw DomainError("superluminal_threshold: negative mass");
  if (m == 0.0) return 0.0;
  auto excess = [&](double p) {
    const double E = std::hypot(p, m);
    return p / E * std::exp(tau1 * E) - 1.0;
  };
  double hi = 1.0;
  while (excess(hi) <= 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi) || hi > 1e300) return std::nullopt;
  }
  return numerics::bisect(excess, 0.0, hi, 1e-12);
}

MaxEnergy max_energy_case_b(double tau0) {
  if (!(tau0 > 0.0)) throw DomainError("max_energy_case_b: tau0 must be positive");
  return {kPi / (2.0 * tau0), 1.0 / tau0};
}

Complex stationary_factor(const ComplexTime& s, Complex epsilon) {
  return std::exp(s.s() * epsilon);
}

StationarySplit stationary_split(const ComplexTime& s, Complex epsilon) {
  return {std::exp(s.t * epsilon.imag() + s.v * epsilon.real()),
          -(s.t * epsilon.real() - s.v * epsilon.imag())};
}

double reality_residual(double E, Complex lambda, Complex delta_s) {
  return std::abs(ed_general(E, lambda, delta_s).imag());
}

KinematicPoint kinematic_point(const StepSpec& spec, const Vec3& p, double m) {
  KinematicPoint k;
  k.p = p;
  k.m = m;
  k.E = rel_energy(p.norm(), m);
  k.E_D = deformed_energy(spec, k.E);
  if (k.E > 0.0) {
    k.v = group_velocity(spec, p, m);
    k.g = canonical_factor(spec, k.E);
  }
  return k;
}

}  // namespace chronon
