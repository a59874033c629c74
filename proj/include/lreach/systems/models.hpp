#pragma once

#include <string>

#include "lreach/lagrangian/problem.hpp"

namespace lreach::systems {

struct DoubleIntegratorParams {
  double T = 0.25;
  double variance = 0.005;   // Sigma = variance * I2
  double state_bound = 1.0;  // K = T = [-b, b]^2
  double input_bound = 1.0;  // U = [-b, b]
  double beta = 0.8;
  int horizon = 5;
};

/// A = [[1, T], [0, 1]], B = [T^2 / 2, T]'.
lagrangian::ReachProblem double_integrator(const DoubleIntegratorParams& p = {});

/// Low Earth orbit, R0 = 6871 km, mu = 398600.4418 km^3/s^2.
double leo_orbital_rate();

struct CwhParams {
  double omega = leo_orbital_rate();
  double mass = 300.0;
  double Ts = 20.0;
  double z2_cap = 1.0;  // bounds the line-of-sight cone
  double beta = 0.8;
  int horizon = 5;
};

/// Planar CWH relative motion over z = [x, y, xdot, ydot], u = [Fx, Fy].
lagrangian::ReachProblem cwh_rendezvous(const CwhParams& p = {});

/// "double-integrator" or "cwh" with default parameters.
lagrangian::ReachProblem model_by_name(const std::string& name);

}  // namespace lreach::systems
