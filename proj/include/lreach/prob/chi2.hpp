#pragma once

namespace lreach::prob {

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
/// Series for x < a + 1, Lentz continued fraction for the complement above.
double regularized_gamma_p(double a, double x);

/// P{chi2(dof) <= x}.
double chi2_cdf(int dof, double x);

/// Quantile of chi2(dof): x with |chi2_cdf(dof, x) - p| <= 1e-10.
/// p = 0 gives 0; p >= 1 is rejected ("unreachable confidence level").
double chi2_inv(int dof, double p);

}  // namespace lreach::prob
