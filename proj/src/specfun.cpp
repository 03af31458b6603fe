#include "frachill/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include "frachill/error.hpp"

namespace frachill::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTol = 1e-10;  // internal target, one digit inside the contract

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

struct Estimate {
  cdouble value;
  bool ok;
};

// Complex Kahan accumulator.
struct KahanSum {
  cdouble sum{0.0, 0.0};
  cdouble comp{0.0, 0.0};
  void add(cdouble v) {
    cdouble y = v - comp;
    cdouble t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

Estimate ml_series(const MLParams& p, cdouble z) {
  if (z == cdouble(0.0)) return {cdouble(rgamma(p.beta)), true};
  const cdouble logz = std::log(z);
  KahanSum acc;
  double abs_sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int k = 0; k < 200; ++k) {
    const double arg = p.alpha * k + p.beta;
    const cdouble term = std::exp(double(k) * logz - std::lgamma(arg));
    acc.add(term);
    const double mag = std::abs(term);
    abs_sum += mag;
    if (k > 0 && mag <= prev && mag < 1e-16 * std::abs(acc.sum)) {
      converged = true;
      break;
    }
    prev = mag;
  }
  // Cancellation in an alternating sum leaves roughly eps * sum|terms| of
  // absolute error behind.
  const double lost = std::numeric_limits<double>::epsilon() * abs_sum;
  const bool ok = converged && lost <= kTol * std::max(1.0, std::abs(acc.sum));
  return {acc.sum, ok};
}

cdouble residue_term(const MLParams& p, cdouble z) {
  const cdouble root = std::pow(z, 1.0 / p.alpha);
  return std::pow(z, (1.0 - p.beta) / p.alpha) * std::exp(root) / p.alpha;
}

Estimate ml_asymptotic(const MLParams& p, cdouble z) {
  const double theta = std::abs(std::arg(z));
  const double api = p.alpha * kPi;
  cdouble lead{0.0, 0.0};
  if (theta < api) lead = residue_term(p, z);

  KahanSum acc;
  const cdouble zinv = 1.0 / z;
  cdouble zk{1.0, 0.0};
  double prev = std::numeric_limits<double>::infinity();
  double smallest = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    zk *= zinv;
    const double rg = rgamma(p.beta - p.alpha * k);
    const cdouble term = zk * rg;
    const double mag = std::abs(term);
    if (rg != 0.0 && mag > prev) break;  // divergent tail starts here
    acc.add(-term);
    if (rg != 0.0) {
      prev = mag;
      smallest = std::min(smallest, mag);
    }
    if (mag == 0.0 && rg != 0.0) break;
    if (smallest < 1e-18 * std::max(1.0, std::abs(acc.sum))) break;
  }
  const cdouble value = lead + acc.sum;
  const double scale = std::max(1.0, std::abs(value));
  bool ok = std::isfinite(value.real()) && std::isfinite(value.imag()) &&
            smallest <= 1e-11 * scale;
  // Close to the Stokes sector boundary the switched exponential is only
  // approximately right, so insist that it is negligible there.
  if (std::abs(theta - api) < 0.25 * api) {
    const double r = std::exp(std::pow(std::abs(z), 1.0 / p.alpha) *
                              std::cos(theta / p.alpha));
    if (r * std::pow(std::abs(z), (1.0 - p.beta) / p.alpha) / p.alpha >
        1e-12 * scale)
      ok = false;
  }
  return {value, ok};
}

Estimate ml_integral(const MLParams& p, cdouble z) {
  const double a = p.alpha;
  const double absz = std::abs(z);
  const double theta = std::abs(std::arg(z));
  const double mu_hi = a * kPi;
  const double mu_lo = 0.625 * a * kPi;
  const double mu =
      std::abs(theta - mu_hi) >= std::abs(theta - mu_lo) ? mu_hi : mu_lo;
  const double eps = absz >= 1.0 ? 0.5 : absz + 0.5;
  const double decay = std::abs(std::cos(mu / a));
  const double rmax = std::max(eps * 2.0, std::pow(60.0 / decay, a));
  const double e1 = (1.0 - p.beta) / a;

  auto kernel = [&](double r, double phi) -> cdouble {
    const cdouble zeta = std::polar(r, phi);
    const cdouble root = std::polar(std::pow(r, 1.0 / a), phi / a);
    const cdouble power = std::polar(std::pow(r, e1), phi * e1);
    return std::exp(root) * power / (zeta - z);
  };

  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err_total = 0.0;
  KahanSum acc;
  auto integrate = [&](auto f, double lo, double hi) {
    double err = 0.0;
    double l1 = 0.0;
    const cdouble v = GK::integrate(f, lo, hi, 8, 1e-12, &err, &l1);
    err_total += err;
    acc.add(v);
  };

  auto ray = [&](double r) {
    const cdouble up = kernel(r, mu) * std::polar(1.0, mu);
    const cdouble down = kernel(r, -mu) * std::polar(1.0, -mu);
    return up - down;
  };
  std::vector<double> cuts{eps};
  if (absz > eps && absz < rmax) cuts.push_back(absz);
  cuts.push_back(rmax);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) integrate(ray, cuts[i], cuts[i + 1]);

  auto arc = [&](double phi) {
    return kernel(eps, phi) * cdouble(0.0, eps) * std::polar(1.0, phi);
  };
  integrate(arc, -mu, 0.0);
  integrate(arc, 0.0, mu);

  const cdouble scale = 1.0 / (cdouble(0.0, 2.0 * kPi) * a);
  cdouble value = acc.sum * scale;
  err_total *= std::abs(scale);
  if (theta < mu && absz > eps) value += residue_term(p, z);
  const bool ok = std::isfinite(value.real()) && std::isfinite(value.imag()) &&
                  err_total <= kTol * std::max(1.0, std::abs(value));
  return {value, ok};
}

}  // namespace

void MLParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0))
    fail(ErrorKind::Domain, "Mittag-Leffler alpha must lie in (0, 1]");
  if (!(beta > 0.0)) fail(ErrorKind::Domain, "Mittag-Leffler beta must be positive");
}

double gamma(double x) {
  if (std::isnan(x)) fail(ErrorKind::Domain, "gamma of NaN");
  if (is_nonpositive_integer(x)) fail(ErrorKind::Pole, "gamma pole at non-positive integer");
  return std::tgamma(x);
}

double rgamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  if (x < 0.5) {
    // 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    return boost::math::sin_pi(x) * std::tgamma(1.0 - x) / kPi;
  }
  if (x > 171.0) return 0.0;
  return 1.0 / std::tgamma(x);
}

double upper_incomplete_gamma(double a, double x) {
  if (!(a > 0.0 && a < 2.0)) fail(ErrorKind::Domain, "incomplete gamma needs a in (0, 2)");
  if (!(x >= 0.0)) fail(ErrorKind::Domain, "incomplete gamma needs x >= 0");
  if (x == 0.0) return std::tgamma(a);
  return boost::math::tgamma(a, x);
}

double scaled_upper_incomplete_gamma(double a, double x) {
  if (x < 30.0) return std::exp(x) * upper_incomplete_gamma(a, x);
  if (!(a > 0.0 && a < 2.0)) fail(ErrorKind::Domain, "incomplete gamma needs a in (0, 2)");
  // Legendre continued fraction, modified Lentz evaluation.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::pow(x, a) * h;
}

cdouble mittag_leffler(const MLParams& params, cdouble z, MLRegime regime) {
  params.validate();
  if (!(std::isfinite(z.real()) && std::isfinite(z.imag())) || std::abs(z) > 1e6)
    fail(ErrorKind::Domain, "Mittag-Leffler argument outside |z| <= 1e6");

  if (params.alpha == 1.0 && params.beta == 1.0 && regime == MLRegime::Automatic)
    return std::exp(z);

  // Real input gives a real result; keep it exactly real.
  auto finish = [&](cdouble v) {
    if (z.imag() == 0.0) v.imag(0.0);
    return v;
  };
  auto forced = [&](Estimate e, const char* name) {
    if (!e.ok)
      fail(ErrorKind::Accuracy, std::string("Mittag-Leffler ") + name +
                                    " regime did not reach tolerance");
    return finish(e.value);
  };

  switch (regime) {
    case MLRegime::Series: return forced(ml_series(params, z), "series");
    case MLRegime::Integral: return forced(ml_integral(params, z), "integral");
    case MLRegime::Asymptotic: return forced(ml_asymptotic(params, z), "asymptotic");
    case MLRegime::Automatic: break;
  }

  // Conjugate symmetry is enforced by evaluating in the closed upper half
  // plane only.
  const bool flip = z.imag() < 0.0;
  const cdouble w = flip ? std::conj(z) : z;
  const double r = std::abs(w);
  std::optional<cdouble> result;
  if (r <= 5.0) {
    if (auto e = ml_series(params, w); e.ok) result = e.value;
  } else if (r >= 12.0) {
    if (auto e = ml_asymptotic(params, w); e.ok) result = e.value;
  }
  if (!result) {
    if (auto e = ml_integral(params, w); e.ok) result = e.value;
  }
  if (!result) fail(ErrorKind::Accuracy, "Mittag-Leffler evaluation did not reach tolerance");
  return finish(flip ? std::conj(*result) : *result);
}

RMatrix ml_matrix(const MLParams& params, const RMatrix& a, double scalar) {
  params.validate();
  if (a.rows() != a.cols() || a.rows() == 0 || a.rows() > 4)
    fail(ErrorKind::DimensionMismatch, "ml_matrix needs a square matrix of size 1..4");
  Eigen::EigenSolver<RMatrix> es(a);
  if (es.info() != Eigen::Success)
    fail(ErrorKind::NonDiagonalizable, "eigendecomposition failed");
  const CMatrix v = es.eigenvectors();
  Eigen::JacobiSVD<CMatrix> svd(v);
  const auto& s = svd.singularValues();
  const double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1)
                                            : std::numeric_limits<double>::infinity();
  if (cond > 1e8) fail(ErrorKind::NonDiagonalizable, "eigenvector matrix is ill-conditioned");
  CVector d(a.rows());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    d(i) = mittag_leffler(params, es.eigenvalues()(i) * scalar);
  const CMatrix m = v * d.asDiagonal() * v.inverse();
  const double norm = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (m.imag().cwiseAbs().maxCoeff() > 1e-9 * norm)
    fail(ErrorKind::Accuracy, "matrix Mittag-Leffler result is not real");
  return m.real();
}

}  // namespace frachill::specfun
