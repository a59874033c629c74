#include "lreach/geom/vertex_enum.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <gmpxx.h>

#include "lreach/geom/errors.hpp"

namespace lreach::geom {
namespace {

// Normalized double dot products above this are trusted for their sign.
constexpr double kFilter = 1e-11;

using IntVec = std::vector<mpz_class>;

class Bits {
 public:
  explicit Bits(int n = 0) : words_((n + 63) / 64, 0) {}
  void set(int i) { words_[i / 64] |= (std::uint64_t{1} << (i % 64)); }
  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  Bits operator&(const Bits& o) const {
    Bits r;
    r.words_.resize(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i)
      r.words_[i] = words_[i] & o.words_[i];
    return r;
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t x = words_[w];
      while (x != 0) {
        f(static_cast<int>(w * 64) + std::countr_zero(x));
        x &= x - 1;
      }
    }
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~o.words_[i]) != 0) return false;
    return true;
  }

 private:
  std::vector<std::uint64_t> words_;
};


// Adjacent (plus, minus) pairs of the current extreme rays, by the
// combinatorial test: the common zero set has at least D-2 rows and no
// third ray is zero on all of them. Rows index the rays tight on them so
// neither the pairing nor the test scans every ray.
template <class F>
void for_each_adjacent_pair(const std::vector<const Bits*>& zero, int total,
                            const std::vector<int>& plus,
                            const std::vector<int>& minus, int D, F&& emit) {
  std::vector<std::vector<int>> on_row(total);
  for (std::size_t k = 0; k < zero.size(); ++k)
    zero[k]->for_each([&](int r) { on_row[r].push_back(static_cast<int>(k)); });
  std::vector<char> is_minus(zero.size(), 0);
  for (int n : minus) is_minus[n] = 1;

  std::vector<int> shared(zero.size(), 0);
  std::vector<int> touched;
  for (int p : plus) {
    touched.clear();
    zero[p]->for_each([&](int r) {
      for (int n : on_row[r]) {
        if (!is_minus[n]) continue;
        if (shared[n]++ == 0) touched.push_back(n);
      }
    });
    for (int n : touched) {
      const bool enough = shared[n] >= D - 2;
      shared[n] = 0;
      if (!enough) continue;
      const Bits common = *zero[p] & *zero[n];
      int pivot_row = -1;
      std::size_t fewest = 0;
      common.for_each([&](int r) {
        if (pivot_row < 0 || on_row[r].size() < fewest) {
          pivot_row = r;
          fewest = on_row[r].size();
        }
      });
      bool adjacent = true;
      if (pivot_row >= 0) {
        for (int k : on_row[pivot_row]) {
          if (k == p || k == n) continue;
          if (common.subset_of(*zero[k])) {
            adjacent = false;
            break;
          }
        }
      } else if (D - 2 > 0) {
        adjacent = false;
      }
      if (adjacent) emit(p, n, common);
    }
  }
}

struct Ray {
  IntVec exact;            // primitive integer vector
  Eigen::VectorXd approx;  // unit-norm double copy
  Bits zero;
};

// Every double is m 2^e with an integer m, so a row scales exactly to
// integers by a common power of two.
IntVec to_integers(const Eigen::RowVectorXd& row) {
  int emin = 0;
  bool any = false;
  for (double v : row) {
    if (v == 0.0) continue;
    int e = 0;
    std::frexp(v, &e);
    e -= 53;
    emin = any ? std::min(emin, e) : e;
    any = true;
  }
  IntVec out(row.size());
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    const double v = row[k];
    if (v == 0.0) continue;
    int e = 0;
    const double m = std::frexp(v, &e);
    const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    mpz_class z(static_cast<long>(mant));
    mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), static_cast<unsigned long>(e - 53 - emin));
    out[k] = z;
  }
  return out;
}

Eigen::VectorXd to_unit_double(const IntVec& v) {
  long emax = 0;
  bool any = false;
  for (const auto& z : v) {
    if (z == 0) continue;
    const long e = static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
    emax = any ? std::max(emax, e) : e;
    any = true;
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0) continue;
    long e = 0;
    const double m = mpz_get_d_2exp(&e, v[k].get_mpz_t());
    out[static_cast<Eigen::Index>(k)] = std::ldexp(m, static_cast<int>(e - emax));
  }
  return out / out.norm();
}

mpz_class dot(const IntVec& a, const IntVec& b) {
  mpz_class s = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != 0 && b[k] != 0) s += a[k] * b[k];
  return s;
}

void make_primitive(IntVec& v) {
  mpz_class g = 0;
  for (const auto& z : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1)
    for (auto& z : v) mpz_divexact(z.get_mpz_t(), z.get_mpz_t(), g.get_mpz_t());
}

// Fraction-free Gaussian elimination.
mpz_class bareiss_det(std::vector<IntVec> M) {
  const int n = static_cast<int>(M.size());
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (M[k][k] == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (M[i][k] != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      std::swap(M[k], M[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        M[i][j] = M[k][k] * M[i][j] - M[i][k] * M[k][j];
        mpz_divexact(M[i][j].get_mpz_t(), M[i][j].get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = M[k][k];
  }
  return sign * M[n - 1][n - 1];
}

// Generator of the null space of D-1 independent rows (generalized cross product).
IntVec null_vector(const std::vector<const IntVec*>& rows, int D) {
  IntVec r(D);
  for (int j = 0; j < D; ++j) {
    std::vector<IntVec> minor;
    for (const IntVec* row : rows) {
      IntVec m;
      for (int c = 0; c < D; ++c)
        if (c != j) m.push_back((*row)[c]);
      minor.push_back(std::move(m));
    }
    r[j] = bareiss_det(std::move(minor));
    if (j % 2 == 1) r[j] = -r[j];
  }
  make_primitive(r);
  return r;
}

// Picks D linearly independent rows by greedy max-residual Gram-Schmidt,
// starting from the preferred row (if any).
std::vector<int> independent_rows(const Eigen::MatrixXd& G, int preferred) {
  const int dim = static_cast<int>(G.cols());
  std::vector<int> chosen;
  std::vector<Eigen::VectorXd> q;
  std::vector<bool> used(G.rows(), false);
  auto residual = [&](int i) {
    Eigen::VectorXd r = G.row(i).transpose();
    for (const auto& qi : q) r -= qi.dot(r) * qi;
    return r;
  };
  auto take = [&](int i) {
    Eigen::VectorXd r = residual(i);
    q.push_back(r / r.norm());
    chosen.push_back(i);
    used[i] = true;
  };
  if (preferred >= 0) take(preferred);
  while (static_cast<int>(chosen.size()) < dim) {
    int best = -1;
    double best_norm = 1e-8;
    for (int i = 0; i < G.rows(); ++i) {
      if (used[i]) continue;
      const double n = residual(i).norm();
      if (n > best_norm) {
        best_norm = n;
        best = i;
      }
    }
    if (best < 0) break;
    take(best);
  }
  return chosen;
}

// Extreme rays of the pointed cone {z : G z <= 0}. Returns false when the
// cone is not pointed (G has rank below its column count).
bool extreme_rays(const Eigen::MatrixXd& G_in, int preferred, std::vector<Ray>& rays) {
  const int total = static_cast<int>(G_in.rows());
  const int D = static_cast<int>(G_in.cols());
  Eigen::MatrixXd G = G_in;
  std::vector<IntVec> exact(total);
  for (int i = 0; i < total; ++i) {
    exact[i] = to_integers(G_in.row(i));
    const double n = G.row(i).norm();
    if (n > 0.0) G.row(i) /= n;
  }

  const std::vector<int> basis = independent_rows(G, preferred);
  if (static_cast<int>(basis.size()) < D) return false;

  rays.clear();
  std::vector<bool> processed(total, false);
  for (int j = 0; j < D; ++j) processed[basis[j]] = true;
  for (int j = 0; j < D; ++j) {
    std::vector<const IntVec*> others;
    for (int k = 0; k < D; ++k)
      if (k != j) others.push_back(&exact[basis[k]]);
    Ray r{null_vector(others, D), {}, Bits(total)};
    const mpz_class s = dot(exact[basis[j]], r.exact);
    if (s == 0) throw std::logic_error("vertex enumeration: singular initial basis");
    if (s > 0)
      for (auto& z : r.exact) z = -z;
    r.approx = to_unit_double(r.exact);
    for (int k = 0; k < D; ++k)
      if (k != j) r.zero.set(basis[k]);
    rays.push_back(std::move(r));
  }

  std::vector<int> sign;
  std::vector<mpz_class> val;
  std::vector<char> have_val;
  for (int row = 0; row < total; ++row) {
    if (processed[row]) continue;
    processed[row] = true;
    const Eigen::RowVectorXd g = G.row(row);
    const IntVec& ge = exact[row];

    const std::size_t nr = rays.size();
    sign.assign(nr, 0);
    val.assign(nr, 0);
    have_val.assign(nr, 0);
    std::vector<int> plus, minus, zero;
    for (std::size_t k = 0; k < nr; ++k) {
      const double v = g.dot(rays[k].approx);
      if (v > kFilter) {
        sign[k] = 1;
      } else if (v < -kFilter) {
        sign[k] = -1;
      } else {
        val[k] = dot(ge, rays[k].exact);
        have_val[k] = 1;
        sign[k] = sgn(val[k]);
      }
      if (sign[k] > 0) {
        plus.push_back(static_cast<int>(k));
      } else if (sign[k] < 0) {
        minus.push_back(static_cast<int>(k));
      } else {
        zero.push_back(static_cast<int>(k));
      }
    }
    for (int k : zero) rays[k].zero.set(row);
    if (plus.empty()) continue;

    auto exact_val = [&](int k) -> const mpz_class& {
      if (!have_val[k]) {
        val[k] = dot(ge, rays[k].exact);
        have_val[k] = 1;
      }
      return val[k];
    };

    std::vector<Ray> next;
    next.reserve(zero.size() + minus.size());
    std::vector<const Bits*> zsets;
    for (const auto& r : rays) zsets.push_back(&r.zero);
    for_each_adjacent_pair(zsets, total, plus, minus, D, [&](int p, int n, const Bits& common) {
      const mpz_class& vp = exact_val(p);
      const mpz_class& vn = exact_val(n);
      Ray r{IntVec(D), {}, common};
      for (int c = 0; c < D; ++c) r.exact[c] = vp * rays[n].exact[c] - vn * rays[p].exact[c];
      make_primitive(r.exact);
      r.approx = to_unit_double(r.exact);
      r.zero.set(row);
      next.push_back(std::move(r));
    });
    for (int k : zero) next.push_back(std::move(rays[k]));
    for (int k : minus) next.push_back(std::move(rays[k]));
    rays = std::move(next);
  }
  return true;
}

// Plain floating-point double description with a fixed tolerance. Fast, but
// on nearly degenerate data it can lose rays; callers must certify.
bool float_rays(const Eigen::MatrixXd& G_in, int preferred,
                std::vector<Eigen::VectorXd>& out) {
  constexpr double kTightTol = 1e-9;
  const int total = static_cast<int>(G_in.rows());
  const int D = static_cast<int>(G_in.cols());
  Eigen::MatrixXd G = G_in;
  for (int i = 0; i < total; ++i) {
    const double n = G.row(i).norm();
    if (n > 0.0) G.row(i) /= n;
  }
  const std::vector<int> basis = independent_rows(G, preferred);
  if (static_cast<int>(basis.size()) < D) return false;

  Eigen::MatrixXd GI(D, D);
  for (int j = 0; j < D; ++j) GI.row(j) = G.row(basis[j]);
  const Eigen::MatrixXd inv = GI.fullPivLu().inverse();

  struct FRay {
    Eigen::VectorXd v;
    Bits zero;
  };
  std::vector<FRay> rays;
  std::vector<bool> processed(total, false);
  for (int j = 0; j < D; ++j) processed[basis[j]] = true;
  for (int j = 0; j < D; ++j) {
    FRay r{-inv.col(j), Bits(total)};
    r.v.normalize();
    for (int k = 0; k < D; ++k)
      if (k != j) r.zero.set(basis[k]);
    rays.push_back(std::move(r));
  }

  std::vector<double> vals;
  for (int row = 0; row < total; ++row) {
    if (processed[row]) continue;
    processed[row] = true;
    const Eigen::RowVectorXd g = G.row(row);
    vals.resize(rays.size());
    std::vector<int> plus, minus, zero;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      vals[k] = g.dot(rays[k].v);
      if (vals[k] > kTightTol) {
        plus.push_back(static_cast<int>(k));
      } else if (vals[k] < -kTightTol) {
        minus.push_back(static_cast<int>(k));
      } else {
        zero.push_back(static_cast<int>(k));
      }
    }
    for (int k : zero) rays[k].zero.set(row);
    if (plus.empty()) continue;

    std::vector<FRay> next;
    next.reserve(zero.size() + minus.size());
    for (int k : zero) next.push_back(rays[k]);
    for (int k : minus) next.push_back(rays[k]);
    std::vector<const Bits*> zsets;
    for (const auto& r : rays) zsets.push_back(&r.zero);
    for_each_adjacent_pair(zsets, total, plus, minus, D, [&](int p, int n, const Bits& common) {
      FRay r{vals[p] * rays[n].v - vals[n] * rays[p].v, common};
      r.v.normalize();
      r.zero.set(row);
      next.push_back(std::move(r));
    });
    rays = std::move(next);
  }
  out.clear();
  for (auto& r : rays) out.push_back(std::move(r.v));
  return true;
}

}  // namespace

std::vector<Eigen::VectorXd> dedup_points(std::vector<Eigen::VectorXd> points,
                                          double tol) {
  std::vector<Eigen::VectorXd> out;
  if (points.empty()) return out;
  const auto d = points.front().size();
  using Key = std::vector<long long>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = 1469598103934665603ULL;
      for (long long v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
      return h;
    }
  };
  // Cells of width tol: a duplicate lies in a neighbouring cell.
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> grid;
  Key key(static_cast<std::size_t>(d)), probe(key.size());
  for (auto& p : points) {
    for (Eigen::Index i = 0; i < d; ++i)
      key[static_cast<std::size_t>(i)] = static_cast<long long>(std::floor(p[i] / tol));
    bool dup = false;
    const std::size_t total = static_cast<std::size_t>(std::pow(3.0, static_cast<double>(d)));
    for (std::size_t code = 0; code < total && !dup; ++code) {
      std::size_t c = code;
      for (std::size_t i = 0; i < key.size(); ++i, c /= 3)
        probe[i] = key[i] + static_cast<long long>(c % 3) - 1;
      auto it = grid.find(probe);
      if (it == grid.end()) continue;
      for (std::size_t j : it->second)
        if ((out[j] - p).norm() < tol) {
          dup = true;
          break;
        }
    }
    if (dup) continue;
    grid[key].push_back(out.size());
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Eigen::VectorXd> enumerate_vertices(const Eigen::MatrixXd& A,
                                                const Eigen::VectorXd& b) {
  const int m = static_cast<int>(A.rows());
  const int d = static_cast<int>(A.cols());
  Eigen::MatrixXd G(m + 1, d + 1);
  G.topLeftCorner(m, d) = A;
  G.col(d).head(m) = -b;
  G.row(m).setZero();
  G(m, d) = -1.0;

  std::vector<Ray> rays;
  if (!extreme_rays(G, m, rays))
    throw UnboundedError("vertex enumeration requires bounded polytope");

  std::vector<Eigen::VectorXd> points;
  points.reserve(rays.size());
  for (const auto& r : rays) {
    if (r.exact[d] <= 0)
      throw UnboundedError("vertex enumeration requires bounded polytope");
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x[i] = mpq_class(r.exact[i], r.exact[d]).get_d();
    points.push_back(std::move(x));
  }
  return dedup_points(std::move(points), 1e-7);
}

HullFacets approximate_hull_facets(const std::vector<Eigen::VectorXd>& points) {
  if (points.empty()) throw NotFullDimensionalError("not full-dimensional");
  const int d = static_cast<int>(points.front().size());
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n < d + 1) throw NotFullDimensionalError("not full-dimensional");
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(n);
  Eigen::MatrixXd centred(n, d);
  for (Eigen::Index i = 0; i < n; ++i) centred.row(i) = (points[i] - centroid).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv[d - 1] <= 1e-9 * std::max(1.0, sv[0]))
    throw NotFullDimensionalError("not full-dimensional");

  // Whitened polar: y = W (x - c) has unit spread in every direction.
  const Eigen::MatrixXd W =
      (sv.cwiseInverse() * std::sqrt(static_cast<double>(n))).asDiagonal() *
      svd.matrixV().transpose();
  // Homogenized polar {(a, t) : y_i'a <= t, t >= 0}: vertices a / t.
  Eigen::MatrixXd H(n + 1, d + 1);
  H.topLeftCorner(n, d) = centred * W.transpose();
  H.col(d).head(n).setConstant(-1.0);
  H.row(n).setZero();
  H(n, d) = -1.0;

  std::vector<Eigen::VectorXd> rays;
  if (!float_rays(H, static_cast<int>(n), rays))
    throw NotFullDimensionalError("not full-dimensional");
  HullFacets out;
  std::vector<Eigen::VectorXd> rows;
  for (const auto& r : rays) {
    if (r[d] <= 1e-12) continue;
    const Eigen::VectorXd a = W.transpose() * (r.head(d) / r[d]);
    const double nrm = a.norm();
    Eigen::VectorXd row(d + 1);
    row << a / nrm, (1.0 + a.dot(centroid)) / nrm;
    rows.push_back(std::move(row));
  }
  out.A.resize(static_cast<Eigen::Index>(rows.size()), d);
  out.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.A.row(static_cast<Eigen::Index>(k)) = rows[k].head(d).transpose();
    out.b[static_cast<Eigen::Index>(k)] = rows[k][d];
  }
  return out;
}

}  // namespace lreach::geom
