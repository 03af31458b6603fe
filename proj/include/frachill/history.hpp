#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "frachill/types.hpp"

namespace frachill {

namespace history_kind {

struct Constant {
  RVector value;
};

/// amplitude * sin(frequency * t + phase). With a duration D the sinusoid
/// only covers [t0 - D, t0] and the history is constant before that.
struct TruncatedSinusoid {
  RVector amplitude;
  double phase = 0.0;
  double frequency = 1.0;
  std::optional<double> duration;
};

/// coefficient * exp(rate * t), rate > 0.
struct ExpGrowth {
  double rate = 1.0;
  RVector coefficient;
};

/// far_value for t < ramp_start, then linear down to zero at t0.
struct PiecewiseConstantRamp {
  RVector far_value;
  double ramp_start = -1.0;
};

/// Re(exp(lambda t) sum_k p_k exp(i k omega t)).
struct FloquetForm {
  cdouble lambda;
  double omega = 1.0;
  std::map<int, CVector> coeffs;
};

/// Piecewise-linear interpolation of samples; values has one column per
/// grid point. The history equals the first sample for t < grid.front() and
/// the last grid point must be t0.
struct Sampled {
  std::vector<double> grid;
  RMatrix values;
};

}  // namespace history_kind

/// One exponential mode c * exp(s t) of a history written as Re sum c e^{st}.
struct HistoryMode {
  cdouble s;
  CVector c;
};

/// Constant value taken on (-inf, start].
struct ConstantTail {
  double start;
  RVector value;
};

/// Initial function x0 on (-inf, t0] together with the interval length eta
/// on which its derivative is bounded.
class HistoryFunction {
 public:
  using Kind = std::variant<history_kind::Constant, history_kind::TruncatedSinusoid,
                            history_kind::ExpGrowth, history_kind::PiecewiseConstantRamp,
                            history_kind::FloquetForm, history_kind::Sampled>;

  /// Validates the kind against the requirements of the initial-function
  /// space; throws ErrorKind::Divergence for decaying exponentials and
  /// ErrorKind::Domain for other invalid parameters.
  HistoryFunction(Kind kind, double t0 = 0.0, double eta = 1.0);

  const Kind& kind() const { return kind_; }
  double t0() const { return t0_; }
  double eta() const { return eta_; }
  int dim() const { return dim_; }

  RVector value(double t) const;
  /// Throws ErrorKind::Kink at the non-differentiable points of piecewise kinds.
  RVector derivative(double t) const;

  /// sup_{t <= t0} |x0(t)|_inf (an upper bound for the Floquet kind).
  double sup_norm() const;
  /// sup over [t0 - eta, t0] of |x0'(t)|_inf (an upper bound where exact
  /// evaluation is impractical).
  double derivative_sup() const;
  /// Points in (-inf, t0) where x0 is not differentiable.
  std::vector<double> kinks() const;
  /// Constant piece (-inf, start] if the history has one.
  std::optional<ConstantTail> constant_tail() const;
  /// Bound on |x0(t)|_inf for t <= tail_from, used to truncate the tail.
  double tail_sup() const { return sup_norm(); }
  /// Exponential modes when the history is an untruncated finite sum of them.
  std::optional<std::vector<HistoryMode>> modes() const;

 private:
  Kind kind_;
  double t0_;
  double eta_;
  int dim_ = 0;
};

/// Numerical controls of the forcing evaluation.
struct ForcingConfig {
  double tolerance = 1e-11;
  /// Tail truncation threshold for histories without a constant tail.
  double tail_tolerance = 1e-10;
  int max_depth = 15;
};

/// Evaluates the forcing term
///   F x0(t) = 1/Gamma(1-alpha) int_{-inf}^{t0} (t-tau)^{-alpha} x0'(tau) dtau
/// of a history for t >= t0.
class ForcingEvaluator {
 public:
  ForcingEvaluator(HistoryFunction history, double alpha, ForcingConfig config = {});

  const HistoryFunction& history() const { return history_; }
  double alpha() const { return alpha_; }

  /// Closed forms for constant, ramp and exponential histories; a modal
  /// formula for untruncated sinusoidal and Floquet histories; adaptive
  /// quadrature otherwise. Throws ErrorKind::SingularForcing if the
  /// history derivative is detected to be unbounded at t0.
  RVector operator()(double t) const;

  /// Generic quadrature path regardless of closed forms (cross-checks).
  RVector by_quadrature(double t) const;

  /// Constant C of the decay bound |F x0(t)| <= C (t - t0 + eta)^{-alpha}.
  double bound_constant() const;

 private:
  RVector closed_or_modal(double t, bool& handled) const;

  HistoryFunction history_;
  double alpha_;
  ForcingConfig config_;
  bool singular_ = false;
};

HistoryFunction parse_history(const nlohmann::json& doc);
HistoryFunction load_history(const std::filesystem::path& path);

}  // namespace frachill
