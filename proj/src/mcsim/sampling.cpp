#include <algorithm>
#include <limits>
#include <stdexcept>

#include "lreach/geom/operations.hpp"
#include "lreach/mcsim/philox.hpp"
#include "lreach/mcsim/simulate.hpp"

namespace lreach::mcsim {

std::vector<Eigen::VectorXd> hit_and_run(const geom::HPolytope& P, int count, std::uint64_t seed,
                                         int burn_in, int thin) {
  if (count < 0 || burn_in < 0 || thin < 1) throw std::invalid_argument("hit_and_run: bad arguments");
  const auto ball = geom::chebyshev_center(P);
  if (geom::is_empty(P)) throw std::invalid_argument("hit_and_run: empty polytope");
  if (!std::isfinite(ball.radius)) throw std::invalid_argument("hit_and_run: unbounded polytope");
  const int d = P.dim();
  Philox rng(seed, 0);
  Eigen::VectorXd x = ball.center;
  std::vector<Eigen::VectorXd> out;
  const long total = burn_in + static_cast<long>(count) * thin;
  for (long step = 1; step <= total; ++step) {
    Eigen::VectorXd dir(d);
    for (int i = 0; i < d; ++i) dir[i] = rng.normal();
    dir.normalize();
    const Eigen::VectorXd slack = P.b() - P.A() * x;
    const Eigen::VectorXd rate = P.A() * dir;
    double lo = -std::numeric_limits<double>::infinity(), hi = -lo;
    for (Eigen::Index i = 0; i < rate.size(); ++i) {
      const double s = std::max(slack[i], 0.0);
      if (rate[i] > 0) hi = std::min(hi, s / rate[i]);
      if (rate[i] < 0) lo = std::max(lo, s / rate[i]);
    }
    x += (lo + (hi - lo) * rng.uniform()) * dir;
    if (step > burn_in && (step - burn_in) % thin == 0) out.push_back(x);
  }
  return out;
}

}  // namespace lreach::mcsim
