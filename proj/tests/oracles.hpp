#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace lreach::testing {

/// Calls f on every k-subset of {0, ..., n-1}.
inline void for_each_subset(int n, int k,
                            const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// All basic feasible points of {x : A x <= b}: every d-subset of rows that is
/// nonsingular, solved and kept if feasible within tol.
inline std::vector<Eigen::VectorXd> basic_feasible_points(const Eigen::MatrixXd& A,
                                                          const Eigen::VectorXd& b,
                                                          double tol = 1e-8) {
  const int m = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  std::vector<Eigen::VectorXd> out;
  for_each_subset(m, d, [&](const std::vector<int>& rows) {
    Eigen::MatrixXd M(d, d);
    Eigen::VectorXd r(d);
    for (int i = 0; i < d; ++i) {
      M.row(i) = A.row(rows[i]);
      r[i] = b[rows[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible()) return;
    Eigen::VectorXd x = lu.solve(r);
    if ((A * x - b).maxCoeff() > tol) return;
    for (const auto& o : out)
      if ((o - x).norm() < 1e-7) return;
    out.push_back(x);
  });
  return out;
}

/// max c'x over a bounded feasible polytope by enumeration of vertices.
inline std::optional<double> brute_force_lp_max(const Eigen::VectorXd& c,
                                                const Eigen::MatrixXd& A,
                                                const Eigen::VectorXd& b) {
  const auto pts = basic_feasible_points(A, b);
  if (pts.empty()) return std::nullopt;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) best = std::max(best, c.dot(p));
  return best;
}

/// Adaptive Simpson quadrature with local tolerance tol.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-12, int depth = 60) {
  std::function<double(double, double, double, double, double, double, double, int)>
      rec = [&](double lo, double hi, double flo, double fmid, double fhi,
                double whole, double eps, int level) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid);
    const double rm = 0.5 * (mid + hi);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    const double delta = left + right - whole;
    if (level <= 0 || std::abs(delta) <= 15.0 * eps)
      return left + right + delta / 15.0;
    return rec(lo, mid, flo, flm, fmid, left, eps / 2.0, level - 1) +
           rec(mid, hi, fmid, frm, fhi, right, eps / 2.0, level - 1);
  };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return rec(a, b, fa, fm, fb, whole, tol, depth);
}

/// Chi-squared density with n degrees of freedom.
inline double chi2_density(int n, double x) {
  if (x <= 0.0) return n == 2 ? 0.5 : (n == 1 ? std::numeric_limits<double>::infinity() : 0.0);
  const double k = 0.5 * n;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::log(2.0) - std::lgamma(k));
}

/// CDF of chi2(n) by quadrature of its density. For n = 1 the integrable
/// singularity at 0 is removed by substituting x = s^2.
inline double chi2_cdf_quadrature(int n, double x) {
  if (x <= 0.0) return 0.0;
  if (n == 1) {
    auto g = [](double s) {
      return 2.0 * std::exp(-0.5 * s * s) / std::sqrt(2.0 * M_PI);
    };
    return adaptive_simpson(g, 0.0, std::sqrt(x));
  }
  return adaptive_simpson([n](double t) { return chi2_density(n, t); }, 0.0, x);
}

/// Root of g(x) = target on [lo, hi] by bisection; g increasing.
inline double bisect(const std::function<double(double)>& g, double target,
                     double lo, double hi, int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace lreach::testing
