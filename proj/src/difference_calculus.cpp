#include "chronon/difference_calculus.hpp"

#include <cmath>
#include <utility>

namespace chronon {

AnalyticSignal AnalyticSignal::polynomial(std::vector<Complex> coeffs) {
  AnalyticSignal f;
  f.kind_ = Kind::Polynomial;
  Term t;
  t.coeffs = std::move(coeffs);
  f.terms_.push_back(std::move(t));
  return f;
}

AnalyticSignal AnalyticSignal::exponential(double E, Complex amplitude) {
  AnalyticSignal f;
  f.kind_ = Kind::Exponential;
  Term t;
  t.is_exponential = true;
  t.rate = E;
  t.amplitude = amplitude;
  f.terms_.push_back(std::move(t));
  return f;
}

AnalyticSignal AnalyticSignal::user(std::function<Complex(Complex)> fn) {
  AnalyticSignal f;
  f.kind_ = Kind::User;
  f.user_ = std::move(fn);
  return f;
}

Complex AnalyticSignal::operator()(Complex s) const {
  if (kind_ == Kind::User) return user_(s);
  return derivative(0, s);
}

Complex AnalyticSignal::derivative(int order, Complex s) const {
  if (kind_ == Kind::User) {
    throw CapabilityError("AnalyticSignal: exact derivatives unavailable for user-supplied signals");
  }
  if (order < 0) throw UsageError("AnalyticSignal: negative derivative order");
  Complex total{0.0, 0.0};
  for (const Term& t : terms_) {
    if (t.is_exponential) {
      total += t.amplitude * std::pow(t.rate, order) * std::exp(s * t.rate);
      continue;
    }
    // Horner on the order-th derivative coefficients k!/(k-order)! c_k.
    const auto degree = static_cast<int>(t.coeffs.size()) - 1;
    Complex acc{0.0, 0.0};
    for (int k = degree; k >= order; --k) {
      double falling = 1.0;
      for (int j = 0; j < order; ++j) falling *= static_cast<double>(k - j);
      acc = acc * s + falling * t.coeffs[static_cast<std::size_t>(k)];
    }
    total += acc;
  }
  return total;
}

AnalyticSignal operator+(const AnalyticSignal& a, const AnalyticSignal& b) {
  if (a.kind_ == AnalyticSignal::Kind::User || b.kind_ == AnalyticSignal::Kind::User) {
    return AnalyticSignal::user([a, b](Complex s) { return a(s) + b(s); });
  }
  AnalyticSignal sum;
  sum.kind_ = a.kind_ == b.kind_ && a.kind_ != AnalyticSignal::Kind::Exponential
                  ? a.kind_
                  : AnalyticSignal::Kind::Combination;
  sum.terms_ = a.terms_;
  sum.terms_.insert(sum.terms_.end(), b.terms_.begin(), b.terms_.end());
  return sum;
}

AnalyticSignal operator*(Complex c, const AnalyticSignal& f) {
  if (f.kind_ == AnalyticSignal::Kind::User) {
    return AnalyticSignal::user([c, f](Complex s) { return c * f(s); });
  }
  AnalyticSignal scaled = f;
  for (auto& t : scaled.terms_) {
    if (t.is_exponential) {
      t.amplitude *= c;
    } else {
      for (auto& coeff : t.coeffs) coeff *= c;
    }
  }
  return scaled;
}

Complex series_delta(const AnalyticSignal& f, Complex s, Complex delta_s, Complex lambda,
                     int n_max) {
  if (n_max < 1) throw UsageError("series_delta: n_max must be >= 1");
  if (!f.has_derivatives()) {
    throw CapabilityError("series_delta: requires a polynomial/exponential signal");
  }
  const Complex at = series_expansion_point(s, delta_s, lambda);
  Complex weight{1.0, 0.0};  // λ^{n-1}/n!
  Complex sum{0.0, 0.0};
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) weight *= lambda / static_cast<double>(n);
    sum += weight * f.derivative(n, at);
  }
  return sum;
}

}  // namespace chronon
