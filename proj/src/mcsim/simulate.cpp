#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>

#include <boost/math/special_functions/beta.hpp>

#include "lreach/geom/operations.hpp"
#include "lreach/mcsim/philox.hpp"
#include "lreach/mcsim/simulate.hpp"

namespace lreach::mcsim {

int default_threads() {
  if (const char* env = std::getenv("LREACH_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t > 0) return t;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double clopper_pearson_lower(long successes, long trials, double confidence) {
  if (trials <= 0 || successes < 0 || successes > trials)
    throw std::invalid_argument("clopper_pearson_lower: bad counts");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("clopper_pearson_lower: confidence must lie in (0, 1)");
  if (successes == 0) return 0.0;
  return boost::math::ibeta_inv(static_cast<double>(successes),
                                static_cast<double>(trials - successes + 1), 1.0 - confidence);
}

namespace {

struct Tally {
  long successes = 0;
  long tube_exits = 0;
  long fallback_steps = 0;
};

}  // namespace

SimReport simulate(const lagrangian::ReachProblem& problem, const lagrangian::ReachResult& result,
                   const Eigen::VectorXd& x0, const SimOptions& options) {
  if (options.trials <= 0) throw std::invalid_argument("trials must be positive");
  const TubeController ctrl(problem, result);
  const int N = ctrl.horizon();
  if (x0.size() != problem.system.n()) throw std::invalid_argument("x0: dimension mismatch");
  if (!ctrl.in_tube(x0, N)) throw std::invalid_argument("x0 is not in RA_N");

  const auto& dist = problem.system.disturbance();
  const int n = dist.dim();
  if (options.noise == NoiseMode::kConditional) {
    const auto* E = std::get_if<geom::Ellipsoid>(&result.disturbance_set);
    if (E == nullptr || E->radius2() <= 0.0)
      throw std::invalid_argument("conditional noise needs an ellipsoidal E of positive size");
  }

  auto run = [&](long first, long last, Tally& tally) {
    for (long trial = first; trial < last; ++trial) {
      Philox rng(options.seed, static_cast<std::uint64_t>(trial));
      auto draw = [&] {
        Eigen::VectorXd z(n);
        for (int i = 0; i < n; ++i) z[i] = rng.normal();
        return dist.transform(z);
      };
      Eigen::VectorXd x = x0;
      bool ok = true, exited = false;
      for (int k = 0; k < N && ok; ++k) {
        const int left = N - k;
        if (!geom::contains(problem.safe, x)) {
          ok = false;
          break;
        }
        Eigen::VectorXd u;
        if (ctrl.in_tube(x, left)) {
          u = ctrl.control(x, left);
        } else {
          exited = true;
          ++tally.fallback_steps;
          u = ctrl.fallback(x, left);
        }
        Eigen::VectorXd w;
        switch (options.noise) {
          case NoiseMode::kGaussian:
            w = draw();
            break;
          case NoiseMode::kZero:
            w = dist.mean();
            break;
          case NoiseMode::kConditional: {
            const auto& E = std::get<geom::Ellipsoid>(result.disturbance_set);
            do w = draw();
            while (!E.contains(w, 0.0));
            break;
          }
        }
        x = problem.system.A() * x + problem.system.B() * u + w;
      }
      if (ok && !geom::contains(problem.target, x)) ok = false;
      if (!ctrl.in_tube(x, 0)) exited = true;
      tally.successes += ok;
      tally.tube_exits += exited;
    }
  };

  const long trials = options.trials;
  const int threads = static_cast<int>(
      std::min<long>(options.threads > 0 ? options.threads : default_threads(), trials));
  std::vector<Tally> tallies(static_cast<std::size_t>(threads));
  if (threads == 1) {
    run(0, trials, tallies[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      const long first = trials * t / threads, last = trials * (t + 1) / threads;
      pool.emplace_back([&, t, first, last] {
        try {
          run(first, last, tallies[static_cast<std::size_t>(t)]);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  SimReport rep;
  rep.samples = trials;
  rep.seed = options.seed;
  for (const auto& t : tallies) {
    rep.successes += t.successes;
    rep.tube_exits += t.tube_exits;
    rep.fallback_steps += t.fallback_steps;
  }
  rep.probability = static_cast<double>(rep.successes) / static_cast<double>(trials);
  rep.lower_bound = clopper_pearson_lower(rep.successes, trials);
  return rep;
}

}  // namespace lreach::mcsim
