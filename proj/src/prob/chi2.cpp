#include "lreach/prob/chi2.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lreach::prob {
namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

double gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by the modified Lentz continued fraction.
double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double chi2_density(int dof, double x) {
  const double k = 0.5 * dof;
  if (x <= 0.0) return dof == 2 ? 0.5 : 0.0;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::log(2.0) -
                  std::lgamma(k));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("incomplete gamma: a must be positive");
  if (x < 0.0 || std::isnan(x))
    throw std::invalid_argument("incomplete gamma: x must be non-negative");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double chi2_cdf(int dof, double x) {
  if (dof < 1) throw std::invalid_argument("chi2: degrees of freedom must be >= 1");
  if (x < 0.0 || std::isnan(x)) throw std::invalid_argument("chi2_cdf: x must be >= 0");
  return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_inv(int dof, double p) {
  if (dof < 1) throw std::invalid_argument("chi2: degrees of freedom must be >= 1");
  if (std::isnan(p) || p < 0.0)
    throw std::invalid_argument("chi2_inv: probability must be in [0, 1)");
  if (p >= 1.0) throw std::domain_error("unreachable confidence level");
  if (p == 0.0) return 0.0;

  // Bracket the root.
  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(dof));
  while (chi2_cdf(dof, hi) < p) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::domain_error("unreachable confidence level");
  }

  // Safeguarded Newton: fall back to bisection whenever a step leaves the
  // bracket.
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = chi2_cdf(dof, x) - p;
    if (std::abs(f) <= 1e-13) return x;
    if (f < 0.0) lo = x; else hi = x;
    const double slope = chi2_density(dof, x);
    double next = slope > 0.0 ? x - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * std::max(1.0, x)) return next;
    x = next;
  }
  return x;
}

}  // namespace lreach::prob
