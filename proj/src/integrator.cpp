#include "frachill/integrator.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "frachill/error.hpp"
#include "frachill/specfun.hpp"
#include "parallel.hpp"

namespace frachill {

namespace {

std::size_t step_count(double t0, double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorKind::Domain, "dt must be positive");
  if (!(t_end > t0)) fail(ErrorKind::Domain, "t_end must exceed t0");
  if (dt > t_end - t0) fail(ErrorKind::Domain, "dt must not exceed t_end - t0");
  return static_cast<std::size_t>(std::floor((t_end - t0) / dt + 1e-9));
}

}  // namespace

Trajectory solve_caputo(const IvpProblem& p) {
  validate_order(p.alpha);
  if (!p.rhs) fail(ErrorKind::Domain, "missing right-hand side");
  const std::size_t steps = step_count(p.t0, p.t_end, p.dt);
  const Eigen::Index dim = p.initial.size();
  if (dim == 0 || !p.initial.allFinite()) fail(ErrorKind::Domain, "initial value must be finite and non-empty");
  if (p.forcing && p.forcing->history().dim() != dim)
    fail(ErrorKind::DimensionMismatch, "forcing and state dimensions differ");

  const double a = p.alpha;
  const double h = p.dt;
  Trajectory traj;
  traj.scheme = "fractional-abm-pece";
  traj.dt = h;
  traj.times.resize(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) traj.times[j] = p.t0 + static_cast<double>(j) * h;

  RMatrix forcing = RMatrix::Zero(dim, static_cast<Eigen::Index>(steps + 1));
  if (p.forcing) {
    detail::parallel_for(steps + 1, p.threads, [&](std::size_t j) {
      forcing.col(static_cast<Eigen::Index>(j)) = (*p.forcing)(traj.times[j]);
    });
  }

  // k^a and k^{a+1} for the convolution weights.
  std::vector<double> pa(steps + 2), pa1(steps + 2);
  for (std::size_t k = 0; k < pa.size(); ++k) {
    pa[k] = std::pow(static_cast<double>(k), a);
    pa1[k] = std::pow(static_cast<double>(k), a + 1.0);
  }
  const double cp = std::pow(h, a) * specfun::rgamma(a + 1.0);
  const double cc = std::pow(h, a) * specfun::rgamma(a + 2.0);

  RMatrix& x = traj.values;
  x.resize(dim, static_cast<Eigen::Index>(steps + 1));
  RMatrix f(dim, static_cast<Eigen::Index>(steps + 1));
  x.col(0) = p.initial;
  auto eval = [&](std::size_t j, const RVector& state) -> RVector {
    return p.rhs(traj.times[j], state) - forcing.col(static_cast<Eigen::Index>(j));
  };
  f.col(0) = eval(0, p.initial);

  Eigen::VectorXd wb, wa;
  for (std::size_t n = 0; n < steps; ++n) {
    const Eigen::Index len = static_cast<Eigen::Index>(n + 1);
    wb.resize(len);
    wa.resize(len);
    for (std::size_t j = 0; j <= n; ++j) {
      const std::size_t d = n - j;
      wb(static_cast<Eigen::Index>(j)) = pa[d + 1] - pa[d];
      wa(static_cast<Eigen::Index>(j)) = pa1[d + 2] + pa1[d] - 2.0 * pa1[d + 1];
    }
    const double nn = static_cast<double>(n);
    wa(0) = pa1[n] - (nn - a) * pa[n + 1];

    const RVector predictor = p.initial + cp * (f.leftCols(len) * wb);
    const RVector fp = eval(n + 1, predictor);
    const RVector corrected = p.initial + cc * (fp + f.leftCols(len) * wa);
    if (!corrected.allFinite() || !fp.allFinite()) {
      std::ostringstream msg;
      msg << "state became non-finite after t=" << traj.times[n];
      fail(ErrorKind::NonFiniteState, msg.str());
    }
    x.col(len) = corrected;
    f.col(len) = eval(n + 1, corrected);
  }
  return traj;
}

Trajectory solve_liouville_weyl(double alpha, Rhs rhs, const HistoryFunction& history, double t_end, double dt,
                                int threads) {
  IvpProblem p;
  p.alpha = alpha;
  p.rhs = std::move(rhs);
  p.initial = history.value(history.t0());
  p.t0 = history.t0();
  p.t_end = t_end;
  p.dt = dt;
  p.forcing.emplace(history, alpha);
  p.threads = threads;
  return solve_caputo(p);
}

Trajectory solve_liouville_weyl(const SystemSpec& spec, const HistoryFunction& history, double t_end, double dt,
                                int threads) {
  if (history.dim() != spec.dim()) fail(ErrorKind::DimensionMismatch, "history and system dimensions differ");
  Rhs rhs = [&spec](double t, const RVector& y) -> RVector { return spec.eval_J(t) * y; };
  return solve_liouville_weyl(spec.alpha(), rhs, history, t_end, dt, threads);
}

double voc_solution_scalar(double a, double alpha, const HistoryFunction& history, double t) {
  validate_order(alpha);
  if (!(a < 0.0)) fail(ErrorKind::Domain, "variation-of-constants solution needs A < 0");
  if (history.dim() != 1) fail(ErrorKind::DimensionMismatch, "scalar history required");
  const double t0 = history.t0();
  if (t < t0) fail(ErrorKind::OutOfDomain, "t must not precede t0");
  const double s = t - t0;
  const double u0 = history.value(t0)(0);
  if (s == 0.0) return u0;

  const specfun::MLParams e1{alpha, 1.0};
  const specfun::MLParams ea{alpha, alpha};
  const double free = specfun::mittag_leffler(e1, a * std::pow(s, alpha)).real() * u0;
  if (alpha == 1.0) return free;  // the forcing vanishes identically

  const ForcingEvaluator forcing(history, alpha);
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err_total = 0.0;
  double sum = 0.0;
  auto piece = [&](auto f, double lo, double hi) {
    if (!(hi > lo)) return;
    double err = 0.0;
    sum += GK::integrate(f, lo, hi, 5, 1e-9, &err);
    err_total += err;
  };

  // sigma = t - tau. Near sigma = 0 the substitution v = sigma^alpha
  // absorbs the kernel singularity sigma^{alpha-1}; near sigma = s the
  // forcing behaves like F(t0) + c (tau - t0)^{1-alpha}, which
  // w = (s - sigma)^{1-alpha} makes smooth.
  const double q = 1.0 - alpha;
  const double head = std::min(1.0, 0.5 * s);
  auto near = [&](double v) {
    const double sigma = std::pow(v, 1.0 / alpha);
    return specfun::mittag_leffler(ea, a * v).real() * forcing(t - sigma)(0) / alpha;
  };
  piece(near, 0.0, std::pow(head, alpha));

  auto far = [&](double sigma) {
    return std::pow(sigma, alpha - 1.0) * specfun::mittag_leffler(ea, a * std::pow(sigma, alpha)).real() *
           forcing(t - sigma)(0);
  };
  auto end = [&](double w) {
    const double u = std::pow(w, 1.0 / q);
    return far(s - u) * u / (q * w);
  };
  piece(end, 0.0, std::pow(head, q));

  // The middle on panels that are geometric towards both ends: the kernel
  // varies on the scale of sigma, the forcing on the scale of s - sigma.
  if (s - head > head) {
    std::vector<double> cuts{head, s - head};
    for (double w = 2.0 * head; w < s - head; w *= 2.0) cuts.push_back(w);
    for (double w = 2.0 * head; w < s - head; w *= 2.0) cuts.push_back(s - w);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      if (cuts[i] >= head && cuts[i + 1] <= s - head) piece(far, cuts[i], cuts[i + 1]);
  }
  if (!(err_total <= 1e-7) || !std::isfinite(sum))
    fail(ErrorKind::QuadratureFailure, "variation-of-constants quadrature did not converge");
  return free - sum;
}

}  // namespace frachill
