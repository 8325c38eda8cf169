#ifndef CHRONON_DIFFERENCE_CALCULUS_HPP
#define CHRONON_DIFFERENCE_CALCULUS_HPP

#include <complex>
#include <functional>
#include <vector>

#include "chronon/errors.hpp"
#include "chronon/types.hpp"

namespace chronon {

/// An entire function of the complex evolution parameter s.
///
/// Polynomials, exponentials c·e^{sE} and finite linear combinations of them carry exact
/// derivative evaluators of every order. User-supplied evaluators only support evaluation.
class AnalyticSignal {
 public:
  enum class Kind { Polynomial, Exponential, Combination, User };

  /// Σ_k coeffs[k] s^k.
  static AnalyticSignal polynomial(std::vector<Complex> coeffs);
  /// amplitude · e^{sE}.
  static AnalyticSignal exponential(double E, Complex amplitude = {1.0, 0.0});
  static AnalyticSignal user(std::function<Complex(Complex)> f);

  [[nodiscard]] Complex operator()(Complex s) const;
  /// n-th derivative at s; n = 0 is the value. Throws CapabilityError for user signals.
  [[nodiscard]] Complex derivative(int order, Complex s) const;
  [[nodiscard]] bool has_derivatives() const { return kind_ != Kind::User; }
  [[nodiscard]] Kind kind() const { return kind_; }

  friend AnalyticSignal operator+(const AnalyticSignal& a, const AnalyticSignal& b);
  friend AnalyticSignal operator*(Complex c, const AnalyticSignal& f);

 private:
  struct Term {
    bool is_exponential = false;
    std::vector<Complex> coeffs;  // polynomial
    double rate = 0.0;            // exponential
    Complex amplitude{1.0, 0.0};
  };

  AnalyticSignal() = default;

  Kind kind_ = Kind::Polynomial;
  std::vector<Term> terms_;
  std::function<Complex(Complex)> user_;
};

/// δ_λ/δs f = (f(s + δs) − f(s + δs − λ))/λ for any callable f.
template <typename F, typename Cplx>
Cplx apply_delta(const F& f, const Cplx& s, const Cplx& delta_s, const Cplx& lambda) {
  if (lambda == Cplx(0)) throw DomainError("apply_delta: lambda must be nonzero");
  const Cplx ahead = s + delta_s;
  return (f(ahead) - f(ahead - lambda)) / lambda;
}

/// Expansion point of the truncated series: s* = s + δs − λ. At δs = λ this is s itself.
inline Complex series_expansion_point(Complex s, Complex delta_s, Complex lambda) {
  return s + delta_s - lambda;
}

/// Σ_{n=1}^{n_max} λ^{n−1}/n! f^{(n)}(s*), the Taylor form of the difference quotient.
/// Requires a signal with exact derivatives.
Complex series_delta(const AnalyticSignal& f, Complex s, Complex delta_s, Complex lambda,
                     int n_max);

/// apply_delta(e^{sE}) / e^{sE}; independent of s and equal to E_D(E).
template <typename Real, typename Cplx>
Cplx eigen_ratio(const Real& E, const Cplx& s, const Cplx& delta_s, const Cplx& lambda) {
  using std::exp;
  auto wave = [&E](const Cplx& z) { return exp(z * E); };
  return apply_delta(wave, s, delta_s, lambda) / wave(s);
}

}  // namespace chronon

#endif  // CHRONON_DIFFERENCE_CALCULUS_HPP
