#ifndef CHRONON_NUMERICS_HPP
#define CHRONON_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <cmath>
#include <span>
#include <vector>

#include "chronon/types.hpp"

namespace chronon::numerics {

/// Pairwise (cascade) summation with a fixed split order; the result depends only on
/// the input sequence, never on scheduling.
double pairwise_sum(std::span<const double> values);
Complex pairwise_sum(std::span<const Complex> values);

template <typename Derived>
double pairwise_sum(const Eigen::ArrayBase<Derived>& values) {
  const Eigen::ArrayXd tmp = values;
  return pairwise_sum(std::span<const double>(tmp.data(), static_cast<std::size_t>(tmp.size())));
}

/// Central-difference estimate refined by a 3-level Richardson table (h, h/2, h/4).
/// Error is O(h^6) for smooth f.
template <typename T, typename F>
T richardson_derivative(F&& f, double h) {
  auto central = [&](double step) { return (f(step) - f(-step)) / (2.0 * step); };
  const T d0 = central(h);
  const T d1 = central(h / 2.0);
  const T d2 = central(h / 4.0);
  const T r01 = (4.0 * d1 - d0) / 3.0;
  const T r12 = (4.0 * d2 - d1) / 3.0;
  return (16.0 * r12 - r01) / 15.0;
}

template <typename T>
struct SweptDerivative {
  T value{};
  double step = 0.0;
  double consistency = 0.0;  ///< |difference| to the neighbouring step's estimate
};

/// Richardson derivative of f at 0 for each h in `steps` (descending); reports the estimate
/// of the adjacent pair that agrees best. Works for real- and complex-valued f.
template <typename F>
auto swept_derivative(F&& f, std::span<const double> steps) {
  using T = std::decay_t<decltype(f(0.0))>;
  if (steps.empty()) throw std::invalid_argument("swept_derivative: no steps");
  std::vector<T> est;
  est.reserve(steps.size());
  for (double h : steps) est.push_back(richardson_derivative<T>(f, h));
  SweptDerivative<T> best{est[0], steps[0], 0.0};
  if (est.size() == 1) return best;
  best.consistency = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < est.size(); ++i) {
    using std::abs;
    const double gap = abs(est[i + 1] - est[i]);
    if (gap < best.consistency) best = {est[i], steps[i], gap};
  }
  return best;
}

/// Bisection on a bracket [lo, hi] with sign(f(lo)) != sign(f(hi)).
double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol);

template <typename T = double>
struct Extremum {
  T x{};
  T value{};
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi]. Templated on the
/// scalar: in double the location of a smooth maximum resolves only to ~sqrt(eps), so
/// use a wider scalar when the abscissa itself is wanted.
template <typename T, typename F>
Extremum<T> golden_section_max(F&& f, T lo, T hi, T abs_tol) {
  using std::sqrt;
  const T inv_phi = (sqrt(T(5)) - T(1)) / T(2);
  T a = lo;
  T b = hi;
  T c = b - inv_phi * (b - a);
  T d = a + inv_phi * (b - a);
  T fc = f(c);
  T fd = f(d);
  while (b - a > abs_tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    if (!(c < d)) break;  // bracket below resolution
  }
  const T x = (a + b) / T(2);
  return {x, f(x)};
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = a + b x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Observed convergence order: slope of log(residual) vs log(step).
double fit_order(std::span<const double> steps, std::span<const double> residuals);

}  // namespace chronon::numerics

#endif  // CHRONON_NUMERICS_HPP
