#include "frachill/history.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "frachill/error.hpp"
#include "frachill/specfun.hpp"
#include "frachill/system.hpp"
#include "json_util.hpp"

namespace frachill {

namespace hk = history_kind;
using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double inf_norm(const RVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
double inf_norm(const CVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// max |sin(x)| over [lo, hi].
double max_abs_sin(double lo, double hi) {
  if (hi - lo >= std::numbers::pi) return 1.0;
  const double half_pi = std::numbers::pi / 2.0;
  const double first = std::ceil((lo - half_pi) / std::numbers::pi);
  if (half_pi + first * std::numbers::pi <= hi) return 1.0;
  return std::max(std::abs(std::sin(lo)), std::abs(std::sin(hi)));
}

// Index of the cell [grid[i], grid[i+1]] containing t (clamped).
std::size_t cell_of(const std::vector<double>& grid, double t) {
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t i = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  return std::min(i, grid.size() - 2);
}

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

}  // namespace

HistoryFunction::HistoryFunction(Kind kind, double t0, double eta)
    : kind_(std::move(kind)), t0_(t0), eta_(eta) {
  if (!std::isfinite(t0_)) fail(ErrorKind::Domain, "t0 must be finite");
  if (!(eta_ > 0.0) || !std::isfinite(eta_)) fail(ErrorKind::Domain, "eta must be positive");
  auto check_vec = [](const RVector& v, const char* what) {
    if (v.size() == 0) fail(ErrorKind::Domain, std::string(what) + " must be non-empty");
    if (!v.allFinite()) fail(ErrorKind::Domain, std::string(what) + " must be finite");
    return static_cast<int>(v.size());
  };
  dim_ = std::visit(
      overloaded{
          [&](const hk::Constant& k) { return check_vec(k.value, "value"); },
          [&](const hk::TruncatedSinusoid& k) {
            if (!std::isfinite(k.phase) || !(k.frequency >= 0.0) || !std::isfinite(k.frequency))
              fail(ErrorKind::Domain, "sinusoid phase/frequency invalid");
            if (k.duration && !(*k.duration > 0.0 && std::isfinite(*k.duration)))
              fail(ErrorKind::Domain, "sinusoid duration must be positive");
            return check_vec(k.amplitude, "amplitude");
          },
          [&](const hk::ExpGrowth& k) {
            if (k.rate < 0.0)
              fail(ErrorKind::Divergence,
                   "decaying exponential history grows without bound in the past; forcing does not exist");
            if (!(k.rate > 0.0) || !std::isfinite(k.rate)) fail(ErrorKind::Domain, "growth rate must be positive");
            return check_vec(k.coefficient, "coefficient");
          },
          [&](const hk::PiecewiseConstantRamp& k) {
            if (!(k.ramp_start < t0_)) fail(ErrorKind::Domain, "ramp_start must be before t0");
            return check_vec(k.far_value, "far_value");
          },
          [&](const hk::FloquetForm& k) {
            if (!(k.lambda.real() >= 0.0) || !std::isfinite(k.lambda.imag()) || !std::isfinite(k.lambda.real()))
              fail(ErrorKind::Domain, "Floquet history needs Re(lambda) >= 0");
            if (!(k.omega > 0.0)) fail(ErrorKind::Domain, "Floquet omega must be positive");
            if (k.coeffs.empty()) fail(ErrorKind::Domain, "Floquet history needs coefficients");
            const Eigen::Index n = k.coeffs.begin()->second.size();
            for (const auto& [idx, c] : k.coeffs) {
              if (c.size() != n || n == 0) fail(ErrorKind::DimensionMismatch, "Floquet coefficients differ in size");
              if (!c.allFinite()) fail(ErrorKind::Domain, "Floquet coefficients must be finite");
            }
            return static_cast<int>(n);
          },
          [&](const hk::Sampled& k) {
            if (k.grid.size() < 2) fail(ErrorKind::Domain, "sampled history needs at least two points");
            if (static_cast<std::size_t>(k.values.cols()) != k.grid.size() || k.values.rows() == 0)
              fail(ErrorKind::DimensionMismatch, "sampled values must have one column per grid point");
            for (std::size_t i = 0; i + 1 < k.grid.size(); ++i)
              if (!(k.grid[i] < k.grid[i + 1])) fail(ErrorKind::Domain, "sample grid must be increasing");
            if (std::abs(k.grid.back() - t0_) > 1e-12 * std::max(1.0, std::abs(t0_)))
              fail(ErrorKind::Domain, "last sample must lie at t0");
            if (!k.values.allFinite()) fail(ErrorKind::Domain, "sampled values must be finite");
            return static_cast<int>(k.values.rows());
          },
      },
      kind_);
}

RVector HistoryFunction::value(double t) const {
  if (t > t0_ + 1e-12 * std::max(1.0, std::abs(t0_)))
    fail(ErrorKind::OutOfDomain, "history evaluated after t0");
  return std::visit(
      overloaded{
          [&](const hk::Constant& k) -> RVector { return k.value; },
          [&](const hk::TruncatedSinusoid& k) -> RVector {
            const double s = k.duration ? std::max(t, t0_ - *k.duration) : t;
            return k.amplitude * std::sin(k.frequency * s + k.phase);
          },
          [&](const hk::ExpGrowth& k) -> RVector { return k.coefficient * std::exp(k.rate * t); },
          [&](const hk::PiecewiseConstantRamp& k) -> RVector {
            if (t <= k.ramp_start) return k.far_value;
            return k.far_value * ((t0_ - t) / (t0_ - k.ramp_start));
          },
          [&](const hk::FloquetForm& k) -> RVector {
            CVector sum = CVector::Zero(dim_);
            for (const auto& [idx, c] : k.coeffs) sum += c * std::polar(1.0, idx * k.omega * t);
            return (sum * std::exp(k.lambda * t)).real();
          },
          [&](const hk::Sampled& k) -> RVector {
            if (t <= k.grid.front()) return k.values.col(0);
            const std::size_t i = cell_of(k.grid, t);
            const double w = (t - k.grid[i]) / (k.grid[i + 1] - k.grid[i]);
            return (1.0 - w) * k.values.col(i) + w * k.values.col(i + 1);
          },
      },
      kind_);
}

RVector HistoryFunction::derivative(double t) const {
  if (t > t0_ + 1e-12 * std::max(1.0, std::abs(t0_)))
    fail(ErrorKind::OutOfDomain, "history derivative evaluated after t0");
  bool at_kink;
  if (const auto* s = std::get_if<hk::Sampled>(&kind_))
    at_kink = std::binary_search(s->grid.begin(), s->grid.end() - 1, t);
  else {
    const auto points = kinks();
    at_kink = std::find(points.begin(), points.end(), t) != points.end();
  }
  if (at_kink) fail(ErrorKind::Kink, "history is not differentiable at t=" + std::to_string(t));
  return std::visit(
      overloaded{
          [&](const hk::Constant& k) -> RVector { return RVector::Zero(k.value.size()); },
          [&](const hk::TruncatedSinusoid& k) -> RVector {
            if (k.duration && t < t0_ - *k.duration) return RVector::Zero(dim_);
            return k.amplitude * (k.frequency * std::cos(k.frequency * t + k.phase));
          },
          [&](const hk::ExpGrowth& k) -> RVector {
            return k.coefficient * (k.rate * std::exp(k.rate * t));
          },
          [&](const hk::PiecewiseConstantRamp& k) -> RVector {
            if (t < k.ramp_start) return RVector::Zero(dim_);
            return -k.far_value / (t0_ - k.ramp_start);
          },
          [&](const hk::FloquetForm& k) -> RVector {
            CVector sum = CVector::Zero(dim_);
            for (const auto& [idx, c] : k.coeffs)
              sum += c * ((k.lambda + cdouble(0.0, idx * k.omega)) * std::polar(1.0, idx * k.omega * t));
            return (sum * std::exp(k.lambda * t)).real();
          },
          [&](const hk::Sampled& k) -> RVector {
            // Exact slope of the interpolant (the centred difference of a
            // piecewise-linear function away from its nodes).
            if (t < k.grid.front()) return RVector::Zero(dim_);
            const std::size_t i = cell_of(k.grid, t);
            return (k.values.col(i + 1) - k.values.col(i)) / (k.grid[i + 1] - k.grid[i]);
          },
      },
      kind_);
}

double HistoryFunction::sup_norm() const {
  return std::visit(
      overloaded{
          [&](const hk::Constant& k) { return inf_norm(k.value); },
          [&](const hk::TruncatedSinusoid& k) {
            double m;
            if (k.frequency == 0.0)
              m = std::abs(std::sin(k.phase));
            else if (!k.duration)
              m = 1.0;
            else
              m = max_abs_sin(k.frequency * (t0_ - *k.duration) + k.phase, k.frequency * t0_ + k.phase);
            return m * inf_norm(k.amplitude);
          },
          [&](const hk::ExpGrowth& k) { return inf_norm(k.coefficient) * std::exp(k.rate * t0_); },
          [&](const hk::PiecewiseConstantRamp& k) { return inf_norm(k.far_value); },
          [&](const hk::FloquetForm& k) {
            double s = 0.0;
            for (const auto& [idx, c] : k.coeffs) s += inf_norm(c);
            return s * std::exp(k.lambda.real() * t0_);
          },
          [&](const hk::Sampled& k) { return k.values.cwiseAbs().maxCoeff(); },
      },
      kind_);
}

double HistoryFunction::derivative_sup() const {
  const double lo = t0_ - eta_;
  return std::visit(
      overloaded{
          [&](const hk::Constant&) { return 0.0; },
          [&](const hk::TruncatedSinusoid& k) { return inf_norm(k.amplitude) * k.frequency; },
          [&](const hk::ExpGrowth& k) { return inf_norm(k.coefficient) * k.rate * std::exp(k.rate * t0_); },
          [&](const hk::PiecewiseConstantRamp& k) { return inf_norm(k.far_value) / (t0_ - k.ramp_start); },
          [&](const hk::FloquetForm& k) {
            double s = 0.0;
            for (const auto& [idx, c] : k.coeffs)
              s += inf_norm(c) * std::abs(k.lambda + cdouble(0.0, idx * k.omega));
            return s * std::exp(k.lambda.real() * t0_);
          },
          [&](const hk::Sampled& k) {
            double m = 0.0;
            for (std::size_t i = 0; i + 1 < k.grid.size(); ++i) {
              if (k.grid[i + 1] <= lo) continue;
              const double slope =
                  inf_norm(RVector(k.values.col(i + 1) - k.values.col(i))) / (k.grid[i + 1] - k.grid[i]);
              m = std::max(m, slope);
            }
            return m;
          },
      },
      kind_);
}

std::vector<double> HistoryFunction::kinks() const {
  return std::visit(
      overloaded{
          [&](const hk::TruncatedSinusoid& k) {
            return k.duration ? std::vector<double>{t0_ - *k.duration} : std::vector<double>{};
          },
          [&](const hk::PiecewiseConstantRamp& k) { return std::vector<double>{k.ramp_start}; },
          [&](const hk::Sampled& k) { return std::vector<double>(k.grid.begin(), k.grid.end() - 1); },
          [&](const auto&) { return std::vector<double>{}; },
      },
      kind_);
}

std::optional<ConstantTail> HistoryFunction::constant_tail() const {
  return std::visit(
      overloaded{
          [&](const hk::Constant& k) -> std::optional<ConstantTail> { return ConstantTail{t0_, k.value}; },
          [&](const hk::TruncatedSinusoid& k) -> std::optional<ConstantTail> {
            if (!k.duration) return std::nullopt;
            const double start = t0_ - *k.duration;
            return ConstantTail{start, value(start)};
          },
          [&](const hk::PiecewiseConstantRamp& k) -> std::optional<ConstantTail> {
            return ConstantTail{k.ramp_start, k.far_value};
          },
          [&](const hk::Sampled& k) -> std::optional<ConstantTail> {
            return ConstantTail{k.grid.front(), k.values.col(0)};
          },
          [&](const auto&) -> std::optional<ConstantTail> { return std::nullopt; },
      },
      kind_);
}

std::optional<std::vector<HistoryMode>> HistoryFunction::modes() const {
  return std::visit(
      overloaded{
          [&](const hk::TruncatedSinusoid& k) -> std::optional<std::vector<HistoryMode>> {
            if (k.duration) return std::nullopt;
            // a sin(wt + p) = Re(-i a e^{ip} e^{iwt})
            CVector c = k.amplitude.cast<cdouble>() * (cdouble(0.0, -1.0) * std::polar(1.0, k.phase));
            return std::vector<HistoryMode>{{cdouble(0.0, k.frequency), c}};
          },
          [&](const hk::ExpGrowth& k) -> std::optional<std::vector<HistoryMode>> {
            return std::vector<HistoryMode>{{cdouble(k.rate, 0.0), k.coefficient.cast<cdouble>()}};
          },
          [&](const hk::FloquetForm& k) -> std::optional<std::vector<HistoryMode>> {
            std::vector<HistoryMode> out;
            for (const auto& [idx, c] : k.coeffs) out.push_back({k.lambda + cdouble(0.0, idx * k.omega), c});
            return out;
          },
          [&](const auto&) -> std::optional<std::vector<HistoryMode>> { return std::nullopt; },
      },
      kind_);
}

// ---------------------------------------------------------------------------

namespace {

// Detects sampled histories whose slopes blow up towards t0 like a power
// |t0 - t|^p with p < 0, i.e. discretisations of a derivative that is
// unbounded at t0.
bool sampled_cusp(const hk::Sampled& s, double eta) {
  const auto& g = s.grid;
  const double t0 = g.back();
  std::vector<double> logd, logs;
  std::vector<double> window;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double mid = 0.5 * (g[i] + g[i + 1]);
    if (t0 - mid > eta) continue;
    const double slope = inf_norm(RVector(s.values.col(i + 1) - s.values.col(i))) / (g[i + 1] - g[i]);
    window.push_back(slope);
  }
  if (window.size() < 8) return false;
  const double last = window.back();
  std::vector<double> sorted = window;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  if (!(last > 8.0 * median)) return false;
  // log-log fit over the cells closest to t0
  const std::size_t m = std::min<std::size_t>(window.size(), 50);
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t i = g.size() - 2 - j;
    const double d = t0 - 0.5 * (g[i] + g[i + 1]);
    const double slope = window[window.size() - 1 - j];
    if (slope <= 0.0) return false;
    logd.push_back(std::log(d));
    logs.push_back(std::log(slope));
  }
  const double n = static_cast<double>(logd.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t j = 0; j < logd.size(); ++j) {
    sx += logd[j];
    sy += logs[j];
    sxx += logd[j] * logd[j];
    sxy += logd[j] * logs[j];
  }
  const double p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return p < -0.25;
}

}  // namespace

ForcingEvaluator::ForcingEvaluator(HistoryFunction history, double alpha, ForcingConfig config)
    : history_(std::move(history)), alpha_(alpha), config_(config) {
  validate_order(alpha_);
  if (const auto* s = std::get_if<hk::Sampled>(&history_.kind())) singular_ = sampled_cusp(*s, history_.eta());
}

double ForcingEvaluator::bound_constant() const {
  if (alpha_ == 1.0) return 0.0;
  return specfun::rgamma(1.0 - alpha_) *
         (2.0 * history_.sup_norm() + history_.eta() / (1.0 - alpha_) * history_.derivative_sup());
}

RVector ForcingEvaluator::operator()(double t) const {
  const double t0 = history_.t0();
  if (t < t0) fail(ErrorKind::OutOfDomain, "forcing evaluated before t0");
  if (alpha_ == 1.0) return RVector::Zero(history_.dim());
  if (singular_)
    fail(ErrorKind::SingularForcing, "history derivative appears unbounded at t0; forcing does not exist");
  bool handled = false;
  RVector out = closed_or_modal(t, handled);
  if (handled) return out;
  return by_quadrature(t);
}

RVector ForcingEvaluator::closed_or_modal(double t, bool& handled) const {
  const double a = alpha_;
  const double t0 = history_.t0();
  const double delta = t - t0;
  handled = true;
  if (const auto* k = std::get_if<hk::Constant>(&history_.kind())) return RVector::Zero(k->value.size());
  if (const auto* k = std::get_if<hk::PiecewiseConstantRamp>(&history_.kind())) {
    const double len = t0 - k->ramp_start;
    const double f = (std::pow(delta, 1.0 - a) - std::pow(delta + len, 1.0 - a)) * specfun::rgamma(2.0 - a) / len;
    return k->far_value * f;
  }
  if (const auto* k = std::get_if<hk::ExpGrowth>(&history_.kind())) {
    const double r = k->rate;
    const double f = std::pow(r, a) * std::exp(r * t0) *
                     specfun::scaled_upper_incomplete_gamma(1.0 - a, r * delta) * specfun::rgamma(1.0 - a);
    return k->coefficient * f;
  }
  const auto modes = history_.modes();
  if (!modes) {
    handled = false;
    return {};
  }
  // Each mode c e^{s tau} contributes
  //   c e^{s t0} |s|^a K(rho, d) / Gamma(1-a),  K = int_0^inf (rho + w d)^{-a} e^{-w} dw,
  // with rho = |s| (t - t0), d = conj(s)/|s|; the contour is rotated onto
  // the ray where e^{-s u} decays.
  CVector sum = CVector::Zero(history_.dim());
  const double q = 1.0 - a;
  for (const HistoryMode& m : *modes) {
    const double mag = std::abs(m.s);
    if (mag == 0.0) continue;
    const cdouble d = std::conj(m.s) / mag;
    const double rho = mag * delta;
    cdouble kval;
    if (rho == 0.0) {
      kval = std::pow(d, -a) * specfun::gamma(q);
    } else {
      // The integrand is smooth in w but changes scale at w ~ rho, so the
      // panels grow geometrically from rho. For rho < 1 the part of
      // (rho + w d)^{-a} on [0, 1] is integrated exactly and only the
      // remainder with e^{-w} - 1 = O(w) is left to quadrature.
      double err_total = 0.0;
      kval = 0.0;
      auto piece = [&](auto g, double lo, double hi) {
        double err = 0.0;
        kval += GK::integrate(g, lo, hi, 4, 1e-12, &err);
        err_total += err;
      };
      auto f = [&](double w) { return std::pow(cdouble(rho) + w * d, -a) * std::exp(-w); };
      double lo = 0.0;
      if (rho < 1.0) {
        kval += (std::pow(cdouble(rho) + d, q) - std::pow(rho, q)) / (d * q);
        auto g = [&](double w) { return std::pow(cdouble(rho) + w * d, -a) * std::expm1(-w); };
        // below 1e-12 the remainder is O(w^{2-a}) and negligible
        lo = std::max(rho, 1e-12);
        if (rho >= 1e-12) piece(g, 0.0, lo);
        for (double hi = std::min(2.0 * lo, 1.0); lo < 1.0; hi = std::min(2.0 * hi, 1.0)) {
          piece(g, lo, hi);
          lo = hi;
        }
      }
      for (double hi = std::max(std::min(rho, 40.0), 2.0 * lo); lo < 40.0; hi = std::min(2.0 * hi, 40.0)) {
        piece(f, lo, hi);
        lo = hi;
      }
      if (err_total > 1e-10 * std::max(1.0, std::abs(kval)))
        fail(ErrorKind::QuadratureFailure, "modal forcing quadrature did not converge");
    }
    sum += m.c * (std::exp(m.s * t0) * std::pow(mag, a) * kval);
  }
  return sum.real() * specfun::rgamma(q);
}

RVector ForcingEvaluator::by_quadrature(double t) const {
  const double a = alpha_;
  const double t0 = history_.t0();
  const double eta = history_.eta();
  if (t < t0) fail(ErrorKind::OutOfDomain, "forcing evaluated before t0");
  const int n = history_.dim();
  if (a == 1.0) return RVector::Zero(n);
  const double delta = t - t0;
  const double q = 1.0 - a;
  const double split = t0 - eta;
  const auto kinks = history_.kinks();
  const auto tail = history_.constant_tail();

  double err_total = 0.0;
  auto integrate = [&](auto f, std::vector<double> cuts) {
    std::sort(cuts.begin(), cuts.end());
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!(cuts[i + 1] > cuts[i])) continue;
      double err = 0.0;
      sum += GK::integrate(f, cuts[i], cuts[i + 1], config_.max_depth, config_.tolerance, &err);
      err_total += err;
    }
    return sum;
  };

  // Near part on [t0 - eta, t0]. Close to t0 the substitution
  // v = (t - tau)^{1-a} removes the weak kernel singularity; further away the
  // kernel is smooth and tau is used directly (the substitution would
  // squeeze the interval and amplify rounding).
  const bool substitute_near = delta < eta;
  std::vector<double> near_cuts;
  if (substitute_near) {
    near_cuts = {std::pow(delta, q), std::pow(delta + eta, q)};
    for (double k : kinks)
      if (k > split && k < t0) near_cuts.push_back(std::pow(t - k, q));
  } else {
    near_cuts = {split, t0};
    for (double k : kinks)
      if (k > split && k < t0) near_cuts.push_back(k);
  }

  // Far part, integrated by parts:
  //   int_{-inf}^{t0-eta} (t-tau)^{-a} x0' dtau
  //     = (t-t0+eta)^{-a} x0(t0-eta) - a int_{-inf}^{t0-eta} (t-tau)^{-a-1} x0 dtau.
  // A constant tail c on (-inf, tc] contributes c (t-tc)^{-a} exactly and
  // leaves a finite interval. Without one, w = (t - tau)^{-a} maps the
  // infinite interval to (0, W] and the tail is cut where the remainder
  // drops below the tail tolerance.
  const double w_hi = std::pow(delta + eta, -a);
  RVector tail_part = RVector::Zero(n);
  std::vector<double> far_cuts;
  const bool substitute_far = !tail;
  if (tail) {
    const double tc = std::min(tail->start, split);
    tail_part = tail->value * std::pow(t - tc, -a);
    far_cuts = {tc, split};
    for (double k : kinks)
      if (k > tc && k < split) far_cuts.push_back(k);
  } else {
    const double sup = history_.tail_sup();
    const double w_lo = sup > 0.0 ? std::min(w_hi, config_.tail_tolerance / sup) : w_hi;
    far_cuts = {w_lo, w_hi};
    for (double k : kinks)
      if (k < split) {
        const double w = std::pow(t - k, -a);
        if (w > w_lo && w < w_hi) far_cuts.push_back(w);
      }
  }

  const RVector boundary = history_.value(split) * w_hi;
  RVector out(n);
  for (int i = 0; i < n; ++i) {
    double i1, ifar;
    if (substitute_near)
      i1 = integrate([&](double v) { return history_.derivative(t - std::pow(v, 1.0 / q))(i) / q; }, near_cuts);
    else
      i1 = integrate([&](double tau) { return std::pow(t - tau, -a) * history_.derivative(tau)(i); }, near_cuts);
    if (substitute_far)
      ifar = integrate([&](double w) { return history_.value(t - std::pow(w, -1.0 / a))(i); }, far_cuts);
    else
      ifar = integrate([&](double tau) { return a * std::pow(t - tau, -a - 1.0) * history_.value(tau)(i); },
                       far_cuts);
    out(i) = (i1 + boundary(i) - tail_part(i) - ifar) * specfun::rgamma(q);
  }
  if (!(err_total * specfun::rgamma(q) <= 1e-9) || !out.allFinite())
    fail(ErrorKind::QuadratureFailure, "forcing quadrature did not converge");
  return out;
}

// ---------------------------------------------------------------------------

HistoryFunction parse_history(const json& doc) {
  using namespace detail;
  const json& kind_v = member(doc, "kind");
  if (!kind_v.is_string()) fail(ErrorKind::Schema, "'kind' must be a string");
  const std::string kind = kind_v.get<std::string>();
  const double t0 = number_or(doc, "t0", 0.0);
  const double eta = number_or(doc, "eta", 1.0);

  if (kind == "constant") return HistoryFunction(hk::Constant{vector_of(member(doc, "value"), "value")}, t0, eta);
  if (kind == "sinusoid") {
    hk::TruncatedSinusoid s;
    s.amplitude = vector_of(member(doc, "amplitude"), "amplitude");
    s.phase = number_or(doc, "phase", 0.0);
    s.frequency = number_or(doc, "frequency", 1.0);
    if (doc.contains("duration") && !doc["duration"].is_null()) s.duration = number(doc, "duration");
    return HistoryFunction(s, t0, eta);
  }
  if (kind == "exp_growth")
    return HistoryFunction(hk::ExpGrowth{number(doc, "rate"), vector_of(member(doc, "coefficient"), "coefficient")},
                           t0, eta);
  if (kind == "ramp")
    return HistoryFunction(
        hk::PiecewiseConstantRamp{vector_of(member(doc, "far_value"), "far_value"), number(doc, "ramp_start")}, t0,
        eta);
  if (kind == "floquet") {
    hk::FloquetForm f;
    const json& lam = member(doc, "lambda");
    f.lambda = cdouble(number(lam, "re"), number_or(lam, "im", 0.0));
    f.omega = number(doc, "omega");
    const json& coeffs = member(doc, "coeffs");
    if (!coeffs.is_array() || coeffs.empty()) fail(ErrorKind::Schema, "'coeffs' must be a non-empty array");
    for (const json& c : coeffs) {
      const int k = integer(c, "k");
      const RVector re = vector_of(member(c, "re"), "re");
      const RVector im = c.contains("im") ? vector_of(c["im"], "im") : RVector::Zero(re.size());
      if (im.size() != re.size()) fail(ErrorKind::DimensionMismatch, "coefficient re/im sizes differ");
      CVector v(re.size());
      v.real() = re;
      v.imag() = im;
      if (!f.coeffs.emplace(k, v).second) fail(ErrorKind::Schema, "duplicate coefficient k=" + std::to_string(k));
    }
    return HistoryFunction(f, t0, eta);
  }
  if (kind == "sampled") {
    hk::Sampled s;
    const RVector grid = vector_of(member(doc, "grid"), "grid");
    s.grid.assign(grid.data(), grid.data() + grid.size());
    const json& vals = member(doc, "values");
    if (!vals.is_array() || vals.size() != s.grid.size())
      fail(ErrorKind::DimensionMismatch, "'values' needs one entry per grid point");
    for (std::size_t j = 0; j < vals.size(); ++j) {
      const RVector v = vector_of(vals[j], "values");
      if (j == 0) s.values.resize(v.size(), static_cast<Eigen::Index>(vals.size()));
      if (v.size() != s.values.rows()) fail(ErrorKind::DimensionMismatch, "sampled values differ in size");
      s.values.col(static_cast<Eigen::Index>(j)) = v;
    }
    if (doc.contains("tail_value")) {
      const RVector tail = vector_of(doc["tail_value"], "tail_value");
      if (tail.size() != s.values.rows() || (tail - s.values.col(0)).cwiseAbs().maxCoeff() > 1e-12)
        fail(ErrorKind::Domain, "tail_value must equal the first sample (continuity)");
    }
    return HistoryFunction(s, doc.contains("t0") ? t0 : s.grid.back(), eta);
  }
  fail(ErrorKind::Schema, "unknown history kind '" + kind + "'");
}

HistoryFunction load_history(const std::filesystem::path& path) {
  return parse_history(detail::read_json_file(path));
}

}  // namespace frachill
