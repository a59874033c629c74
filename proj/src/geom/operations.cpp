#include "lreach/geom/operations.hpp"

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lreach/geom/lp.hpp"
#include "lreach/geom/vertex_enum.hpp"

namespace lreach::geom {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_direction(const Eigen::VectorXd& a, int dim) {
  if (a.size() != dim) throw std::invalid_argument("support: dimension mismatch");
  if (!a.allFinite() || a.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("degenerate direction");
}

bool lex_less(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(),
                                      y.data() + y.size());
}

HPolytope from_rows(int dim, const std::vector<Eigen::VectorXd>& rows) {
  // rows hold [a, b]
  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), dim);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    A.row(i) = rows[i].head(dim);
    b[i] = rows[i][dim];
  }
  return HPolytope(std::move(A), std::move(b));
}

HPolytope sorted(const HPolytope& S) {
  if (S.marked_empty()) return S;
  std::vector<Eigen::VectorXd> rows;
  for (int i = 0; i < S.num_facets(); ++i) {
    Eigen::VectorXd r(S.dim() + 1);
    r << S.A().row(i).transpose(), S.b()[i];
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(), lex_less);
  return from_rows(S.dim(), rows);
}

void check_same_dim(int a, int b) {
  if (a != b) throw std::invalid_argument("dimension mismatch");
}

}  // namespace

double support(const HPolytope& S, const Eigen::VectorXd& a) {
  check_direction(a, S.dim());
  if (S.marked_empty()) return -kInf;
  const LpResult r = lp_solve({a, S.A(), S.b()});
  switch (r.status) {
    case LpStatus::kOptimal: return r.value;
    case LpStatus::kUnbounded: return kInf;
    case LpStatus::kInfeasible: return -kInf;
  }
  return -kInf;
}

double support(const VPolytope& S, const Eigen::VectorXd& a) {
  check_direction(a, S.dim());
  double best = -kInf;
  for (const auto& p : S.points()) best = std::max(best, a.dot(p));
  return best;
}

double support(const Ellipsoid& S, const Eigen::VectorXd& a) {
  check_direction(a, S.dim());
  return a.dot(S.center()) +
         std::sqrt(S.radius2() * a.dot(S.shape() * a));
}

ChebyshevBall chebyshev_center(const HPolytope& S) {
  ChebyshevBall ball;
  ball.center = Eigen::VectorXd::Zero(S.dim());
  if (S.marked_empty()) return ball;
  if (S.num_facets() == 0) {
    ball.radius = kInf;
    return ball;
  }
  const int d = S.dim();
  LpProblem p;
  p.A.resize(S.num_facets(), d + 1);
  p.A.leftCols(d) = S.A();
  p.A.col(d) = S.A().rowwise().norm();
  p.b = S.b();
  p.c = Eigen::VectorXd::Zero(d + 1);
  p.c[d] = 1.0;
  const LpResult r = lp_solve(p);
  if (r.status == LpStatus::kUnbounded) {
    ball.radius = kInf;
  } else if (r.optimal()) {
    ball.center = r.x.head(d);
    ball.radius = r.x[d];
  }
  return ball;
}

bool is_empty(const HPolytope& S) {
  if (S.marked_empty()) return true;
  if (S.dim() == 0) return false;
  return chebyshev_center(S).radius < kEmptyRadius;
}

Extent extent(const HPolytope& S) {
  if (S.marked_empty()) return Extent::kEmpty;
  if (S.dim() == 0) return Extent::kFullDimensional;
  const double r = chebyshev_center(S).radius;
  if (r >= kEmptyRadius) return Extent::kFullDimensional;
  return r >= -kEmptyRadius ? Extent::kFlat : Extent::kEmpty;
}

HPolytope reduce(const HPolytope& S) {
  if (S.dim() == 0) return S;
  if (extent(S) == Extent::kEmpty) return HPolytope::empty(S.dim());
  const int d = S.dim();
  const int m = S.num_facets();

  // Parallel duplicates: keep the tightest.
  std::vector<bool> alive(m, true);
  for (int i = 0; i < m; ++i) {
    if (!alive[i]) continue;
    for (int j = i + 1; j < m; ++j) {
      if (!alive[j]) continue;
      if ((S.A().row(i) - S.A().row(j)).cwiseAbs().maxCoeff() < 1e-12) {
        if (S.b()[j] < S.b()[i]) {
          alive[i] = false;
          break;
        }
        alive[j] = false;
      }
    }
  }

  for (int i = 0; i < m; ++i) {
    if (!alive[i]) continue;
    std::vector<int> others;
    for (int j = 0; j < m; ++j)
      if (alive[j] && j != i) others.push_back(j);
    LpProblem p;
    p.A.resize(static_cast<Eigen::Index>(others.size()) + 1, d);
    p.b.resize(static_cast<Eigen::Index>(others.size()) + 1);
    for (std::size_t k = 0; k < others.size(); ++k) {
      p.A.row(k) = S.A().row(others[k]);
      p.b[k] = S.b()[others[k]];
    }
    p.A.row(others.size()) = S.A().row(i);
    p.b[others.size()] = S.b()[i] + 1.0;
    p.c = S.A().row(i).transpose();
    const LpResult r = lp_solve(p);
    if (r.optimal() && r.value <= S.b()[i] + kContainsTol) alive[i] = false;
  }

  std::vector<Eigen::VectorXd> rows;
  for (int i = 0; i < m; ++i) {
    if (!alive[i]) continue;
    Eigen::VectorXd r(d + 1);
    r << S.A().row(i).transpose(), S.b()[i];
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(), lex_less);
  return from_rows(d, rows);
}

namespace {

// Facets (unit normals) of the hull of full-dimensional points; false when
// the points are flat.
//
// A floating-point polar enumeration proposes facets. Each proposal is
// snapped to a true hull facet by a polar LP in the direction of its
// centre, and duplicates are dropped. The vertices of the resulting set are
// then enumerated exactly; any vertex outside the hull is cut off by the
// hull facet that the same LP finds for it. The loop stops when every
// vertex lies in the hull to within kHullTol (relative to the polar scale).
bool full_hull(const std::vector<Eigen::VectorXd>& pts, int d,
               Eigen::MatrixXd& A, Eigen::VectorXd& b) {
  constexpr double kHullTol = 1e-9;
  const auto n = static_cast<Eigen::Index>(pts.size());
  if (n < d + 1) return false;
  Eigen::MatrixXd P(n, d);
  for (Eigen::Index i = 0; i < n; ++i) P.row(i) = pts[i].transpose();
  const Eigen::VectorXd c = P.colwise().mean().transpose();
  const Eigen::MatrixXd Pc = P.rowwise() - c.transpose();
  const auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(Pc).singularValues();
  if (sv[d - 1] <= 1e-9 * std::max(1.0, sv[0])) return false;

  double scale = 1.0;
  for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());

  // Polar of the centred hull: its vertices a give facets a'(x - c) <= 1.
  LpProblem polar;
  polar.A = Pc;
  polar.b = Eigen::VectorXd::Ones(n);
  std::vector<Eigen::VectorXd> normals;  // polar vertices found so far
  auto snap = [&](const Eigen::VectorXd& direction) {
    polar.c = direction;
    const LpResult r = lp_solve(polar);
    if (!r.optimal()) throw std::runtime_error("hull certification LP failed");
    return r;
  };
  auto add = [&](const Eigen::VectorXd& a) {
    for (const auto& o : normals)
      if ((o - a).norm() <= 1e-9 * std::max(1.0, a.norm())) return false;
    normals.push_back(a);
    return true;
  };

  // Box facets keep every intermediate set bounded.
  for (int i = 0; i < d; ++i)
    for (double sgn : {1.0, -1.0}) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
      e[i] = sgn;
      add(snap(e).x);
    }
  const HullFacets cand = approximate_hull_facets(pts);
  for (Eigen::Index k = 0; k < cand.A.rows(); ++k) {
    const Eigen::VectorXd slack = cand.b[k] - (P * cand.A.row(k).transpose()).array();
    Eigen::VectorXd centre = Eigen::VectorXd::Zero(d);
    int tight = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (slack[i] <= 1e-9 * scale) {
        centre += Pc.row(i).transpose();
        ++tight;
      }
    if (tight == 0) continue;
    add(snap(centre / tight).x);
  }

  for (int round = 0;; ++round) {
    if (round == 100) throw std::runtime_error("hull certification did not converge");
    Eigen::MatrixXd HA(static_cast<Eigen::Index>(normals.size()), d);
    Eigen::VectorXd Hb(static_cast<Eigen::Index>(normals.size()));
    for (std::size_t k = 0; k < normals.size(); ++k) {
      const double nrm = normals[k].norm();
      HA.row(static_cast<Eigen::Index>(k)) = normals[k].transpose() / nrm;
      Hb[static_cast<Eigen::Index>(k)] = (1.0 + normals[k].dot(c)) / nrm;
    }
    const auto verts = enumerate_vertices(HA, Hb);
    bool added = false;
    for (const auto& v : verts) {
      if ((P.rowwise() - v.transpose()).rowwise().squaredNorm().minCoeff() <=
          1e-18 * scale * scale)
        continue;
      const LpResult r = snap(v - c);
      if (r.value <= 1.0 + kHullTol) continue;
      added = add(r.x) || added;
    }
    if (!added) {
      A = std::move(HA);
      b = std::move(Hb);
      return true;
    }
  }
}

// p is extreme in conv(others) unless a separating LP fails.
std::vector<bool> extreme_by_lp(const std::vector<Eigen::VectorXd>& pts, int d) {
  std::vector<bool> alive(pts.size(), true);
  if (pts.size() <= 1) return alive;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (alive[j] && j != i) others.push_back(j);
    // maximize a'p - h  s.t.  a'v_j - h <= 0,  -1 <= a_k <= 1
    const auto no = static_cast<Eigen::Index>(others.size());
    LpProblem p;
    p.A = Eigen::MatrixXd::Zero(no + 2 * d, d + 1);
    p.b = Eigen::VectorXd::Zero(no + 2 * d);
    for (Eigen::Index k = 0; k < no; ++k) {
      p.A.row(k).head(d) = pts[others[k]].transpose();
      p.A(k, d) = -1.0;
    }
    for (int k = 0; k < d; ++k) {
      p.A(no + 2 * k, k) = 1.0;
      p.A(no + 2 * k + 1, k) = -1.0;
      p.b[no + 2 * k] = 1.0;
      p.b[no + 2 * k + 1] = 1.0;
    }
    p.c.resize(d + 1);
    p.c << pts[i], -1.0;
    const LpResult r = lp_solve(p);
    if (r.optimal() && r.value <= kContainsTol) alive[i] = false;
  }
  return alive;
}

}  // namespace

VPolytope reduce(const VPolytope& S) {
  const int d = S.dim();
  std::vector<Eigen::VectorXd> pts = dedup_points(S.points(), kVertexMergeTol);
  std::vector<bool> alive;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  if (d > 0 && full_hull(pts, d, A, b)) {
    // Vertex iff the facets through it have normals spanning R^d.
    double scale = 1.0;
    for (const auto& p : pts) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    alive.assign(pts.size(), false);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Eigen::VectorXd slack = b - A * pts[i];
      std::vector<Eigen::Index> tight;
      for (Eigen::Index k = 0; k < slack.size(); ++k)
        if (slack[k] <= 1e-9 * scale) tight.push_back(k);
      if (static_cast<int>(tight.size()) < d) continue;
      Eigen::MatrixXd N(static_cast<Eigen::Index>(tight.size()), d);
      for (std::size_t k = 0; k < tight.size(); ++k) N.row(k) = A.row(tight[k]);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(N);
      const auto& sv = svd.singularValues();
      alive[i] = sv[d - 1] > 1e-7 * sv[0];
    }
  } else {
    alive = extreme_by_lp(pts, d);
  }
  std::vector<Eigen::VectorXd> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (alive[i]) out.push_back(std::move(pts[i]));
  std::sort(out.begin(), out.end(), lex_less);
  return VPolytope(d, std::move(out));
}

HPolytope intersect(const HPolytope& S1, const HPolytope& S2) {
  check_same_dim(S1.dim(), S2.dim());
  if (S1.marked_empty() || S2.marked_empty()) return HPolytope::empty(S1.dim());
  Eigen::MatrixXd A(S1.num_facets() + S2.num_facets(), S1.dim());
  A << S1.A(), S2.A();
  Eigen::VectorXd b(S1.num_facets() + S2.num_facets());
  b << S1.b(), S2.b();
  return reduce(HPolytope(std::move(A), std::move(b)));
}

namespace {

template <class Subtrahend>
HPolytope pontryagin(const HPolytope& S, const Subtrahend& E) {
  check_same_dim(S.dim(), E.dim());
  if (S.marked_empty()) return HPolytope::empty(S.dim());
  Eigen::VectorXd b = S.b();
  for (int i = 0; i < S.num_facets(); ++i)
    b[i] -= support(E, Eigen::VectorXd(S.A().row(i).transpose()));
  return reduce(HPolytope(S.A(), std::move(b)));
}

}  // namespace

HPolytope minkowski_diff(const HPolytope& S, const Ellipsoid& E) {
  return pontryagin(S, E);
}

HPolytope minkowski_diff(const HPolytope& S, const VPolytope& E) {
  if (E.empty()) throw std::invalid_argument("minkowski_diff: empty subtrahend");
  return pontryagin(S, E);
}

VPolytope minkowski_sum(const VPolytope& S, const VPolytope& P) {
  check_same_dim(S.dim(), P.dim());
  if (S.empty() || P.empty()) return VPolytope(S.dim());
  std::vector<Eigen::VectorXd> sums;
  sums.reserve(S.points().size() * P.points().size());
  for (const auto& v : S.points())
    for (const auto& w : P.points()) sums.push_back(v + w);
  return reduce(VPolytope(S.dim(), std::move(sums)));
}

HPolytope affine_preimage(const HPolytope& S, const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols() || M.rows() != S.dim())
    throw std::invalid_argument("affine_preimage: matrix must be square of set dimension");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& sv = svd.singularValues();
  if (sv.size() > 0 &&
      (sv[sv.size() - 1] == 0.0 || sv[0] / sv[sv.size() - 1] > 1e12))
    throw std::invalid_argument("system matrix singular");
  if (S.marked_empty()) return HPolytope::empty(S.dim());
  return sorted(HPolytope(S.A() * M, S.b()));
}

VPolytope linear_map(const VPolytope& S, const Eigen::MatrixXd& M) {
  if (M.cols() != S.dim()) throw std::invalid_argument("linear_map: dimension mismatch");
  std::vector<Eigen::VectorXd> pts;
  for (const auto& p : S.points()) pts.push_back(M * p);
  return VPolytope(static_cast<int>(M.rows()), std::move(pts));
}

VPolytope vertices(const HPolytope& S) {
  if (S.dim() == 0)
    throw std::invalid_argument("vertices: zero-dimensional set");
  if (S.marked_empty()) return VPolytope(S.dim());
  const double r = chebyshev_center(S).radius;
  if (r == kInf)
    throw UnboundedError("vertex enumeration requires bounded polytope");
  if (r < -kEmptyRadius) return VPolytope(S.dim());
  if (r < kEmptyRadius) throw NotFullDimensionalError("not full-dimensional");
  // Exact enumeration already yields only extreme points.
  auto pts = enumerate_vertices(S.A(), S.b());
  std::sort(pts.begin(), pts.end(), lex_less);
  return VPolytope(S.dim(), std::move(pts));
}

HPolytope facets(const VPolytope& S) {
  const int d = S.dim();
  if (S.empty()) return HPolytope::empty(d);
  auto pts = dedup_points(S.points(), kVertexMergeTol);
  if (static_cast<int>(pts.size()) < d + 1)
    throw NotFullDimensionalError("not full-dimensional");
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  if (!full_hull(pts, d, A, b)) throw NotFullDimensionalError("not full-dimensional");
  return reduce(HPolytope(std::move(A), std::move(b)));
}

bool contains(const HPolytope& S, const Eigen::VectorXd& x, double tol) {
  check_same_dim(S.dim(), static_cast<int>(x.size()));
  if (S.marked_empty()) return false;
  if (S.num_facets() == 0) return true;
  return (S.A() * x - S.b()).maxCoeff() <= tol;
}

bool contains(const VPolytope& S, const Eigen::VectorXd& x, double tol) {
  check_same_dim(S.dim(), static_cast<int>(x.size()));
  if (S.empty()) return false;
  const int d = S.dim();
  const auto n = static_cast<Eigen::Index>(S.size());
  LpProblem p;
  p.A = Eigen::MatrixXd::Zero(n + 2 * d, d + 1);
  p.b = Eigen::VectorXd::Zero(n + 2 * d);
  for (Eigen::Index k = 0; k < n; ++k) {
    p.A.row(k).head(d) = S.points()[k].transpose();
    p.A(k, d) = -1.0;
  }
  for (int k = 0; k < d; ++k) {
    p.A(n + 2 * k, k) = 1.0;
    p.A(n + 2 * k + 1, k) = -1.0;
    p.b[n + 2 * k] = 1.0;
    p.b[n + 2 * k + 1] = 1.0;
  }
  p.c.resize(d + 1);
  p.c << x, -1.0;
  const LpResult r = lp_solve(p);
  return r.optimal() && r.value <= tol;
}

bool subset(const HPolytope& inner, const HPolytope& outer, double tol) {
  check_same_dim(inner.dim(), outer.dim());
  if (is_empty(inner)) return true;
  if (outer.marked_empty()) return false;
  for (int i = 0; i < outer.num_facets(); ++i) {
    const double h = support(inner, Eigen::VectorXd(outer.A().row(i).transpose()));
    if (h > outer.b()[i] + tol) return false;
  }
  return true;
}

HPolytope slice(const HPolytope& S, const std::map<int, double>& fixed) {
  const int d = S.dim();
  for (const auto& [idx, value] : fixed) {
    if (idx < 0 || idx >= d) throw std::invalid_argument("slice: index out of range");
    if (!std::isfinite(value)) throw std::invalid_argument("slice: non-finite value");
  }
  std::vector<int> free;
  for (int i = 0; i < d; ++i)
    if (!fixed.contains(i)) free.push_back(i);
  const int fd = static_cast<int>(free.size());
  if (S.marked_empty()) return HPolytope::empty(fd);
  Eigen::MatrixXd A(S.num_facets(), fd);
  Eigen::VectorXd b = S.b();
  for (int i = 0; i < S.num_facets(); ++i) {
    for (int k = 0; k < fd; ++k) A(i, k) = S.A()(i, free[k]);
    for (const auto& [idx, value] : fixed) b[i] -= S.A()(i, idx) * value;
  }
  return HPolytope(std::move(A), std::move(b));
}

VPolytope outer_polygon(const Ellipsoid& E, int sides) {
  if (E.dim() != 2) throw std::invalid_argument("outer_polygon: 2-D ellipsoids only");
  if (sides < 3) throw std::invalid_argument("outer_polygon: need at least 3 sides");
  const double pi = std::numbers::pi;
  const double rho = std::sqrt(E.radius2()) / std::cos(pi / sides);
  std::vector<Eigen::VectorXd> pts;
  for (int k = 0; k < sides; ++k) {
    const double th = 2.0 * pi * k / sides + pi / sides;
    Eigen::Vector2d z(rho * std::cos(th), rho * std::sin(th));
    pts.push_back(E.center() + E.shape_factor() * z);
  }
  return VPolytope(2, std::move(pts));
}

}  // namespace lreach::geom
