#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frachill/history.hpp"
#include "frachill/system.hpp"
#include "frachill/types.hpp"

namespace frachill {

using Rhs = std::function<RVector(double t, const RVector& x)>;

/// Caputo problem D^alpha x = rhs(t, x) - F(t) on [t0, t_end], x(t0) = x0,
/// where F is the optional history forcing.
struct IvpProblem {
  double alpha = 1.0;
  Rhs rhs;
  RVector initial;
  double t0 = 0.0;
  double t_end = 1.0;
  double dt = 1e-2;
  std::optional<ForcingEvaluator> forcing;
  /// Threads used to precompute the forcing at the grid nodes.
  int threads = 1;
};

/// Uniformly sampled solution; values has one column per node.
struct Trajectory {
  std::vector<double> times;
  RMatrix values;
  std::string scheme;
  double dt = 0.0;
};

/// Fractional Adams-Bashforth-Moulton predictor-corrector (one corrector
/// evaluation per step, full memory). The grid is t0 + j dt for
/// j = 0..floor((t_end - t0) / dt). Throws ErrorKind::NonFiniteState when
/// the state overflows.
Trajectory solve_caputo(const IvpProblem& problem);

/// Liouville-Weyl problem with initial function x0: solved as the Caputo
/// problem with x(t0) = x0(t0) and the forcing of x0 moved to the right-hand side.
Trajectory solve_liouville_weyl(double alpha, Rhs rhs, const HistoryFunction& history, double t_end,
                                double dt, int threads = 1);

/// Same for the periodic linear system y' = J(t) y of a spec.
Trajectory solve_liouville_weyl(const SystemSpec& spec, const HistoryFunction& history, double t_end,
                                double dt, int threads = 1);

/// Scalar solution u(t) of D^alpha u = A u (A < 0) with history u0 from the
/// variation-of-constants formula
///   u(t) = E_alpha(A s^alpha) u0(t0) - int_0^s sigma^{alpha-1} E_{alpha,alpha}(A sigma^alpha) F(t - sigma) dsigma,
/// s = t - t0, evaluated by adaptive quadrature.
double voc_solution_scalar(double a, double alpha, const HistoryFunction& history, double t);

}  // namespace frachill
