#include "chronon/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "chronon/errors.hpp"

namespace chronon::numerics {
namespace {

template <typename T>
T pairwise(std::span<const T> v) {
  constexpr std::size_t kBlock = 32;
  if (v.size() <= kBlock) {
    T acc{};
    for (const T& x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise(v.first(half)) + pairwise(v.subspan(half));
}

}  // namespace

double pairwise_sum(std::span<const double> values) { return pairwise(values); }
Complex pairwise_sum(std::span<const Complex> values) { return pairwise(values); }

double bisect(const std::function<double(double)>& f, double lo, double hi, double abs_tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw DomainError("bisect: bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "] does not straddle a root");
  }
  while (hi - lo > abs_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (std::signbit(fmid) == std::signbit(flo)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("fit_line: need >= 2 paired samples");
  const auto n = static_cast<double>(x.size());
  const double mx = pairwise_sum(x) / n;
  const double my = pairwise_sum(y) / n;
  std::vector<double> sxx(x.size());
  std::vector<double> sxy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx[i] = (x[i] - mx) * (x[i] - mx);
    sxy[i] = (x[i] - mx) * (y[i] - my);
  }
  const double Sxx = pairwise_sum(sxx);
  if (Sxx == 0.0) throw UsageError("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = pairwise_sum(sxy) / Sxx;
  fit.intercept = my - fit.slope * mx;
  if (x.size() > 2) {
    std::vector<double> r2(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      r2[i] = r * r;
    }
    fit.slope_stderr = std::sqrt(pairwise_sum(r2) / (n - 2.0) / Sxx);
  }
  return fit;
}

double fit_order(std::span<const double> steps, std::span<const double> residuals) {
  std::vector<double> lx(steps.size());
  std::vector<double> ly(residuals.size());
  for (std::size_t i = 0; i < steps.size(); ++i) lx[i] = std::log(steps[i]);
  for (std::size_t i = 0; i < residuals.size(); ++i) ly[i] = std::log(residuals[i]);
  return fit_line(lx, ly).slope;
}

}  // namespace chronon::numerics
