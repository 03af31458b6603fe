#pragma once

#include <filesystem>
#include <map>

#include <json.hpp>

#include "frachill/types.hpp"

namespace frachill {

/// Linear time-periodic fractional system D^alpha y = J(t) y with
/// J(t) = sum_k J_k exp(i k omega t).
///
/// Harmonics are stored for every k in [-K, K] that is present; the
/// negative ones are always the element-wise conjugates of the positive
/// ones, so J(t) is real.
class SystemSpec {
 public:
  /// Builds a spec from the non-negative harmonics; negative harmonics are
  /// generated by conjugation. Throws on invalid order, frequency, missing
  /// J_0, complex J_0 or inconsistent dimensions.
  static SystemSpec from_nonnegative(double alpha, double omega,
                                     const std::map<int, CMatrix>& harmonics);

  double alpha() const { return alpha_; }
  double omega() const { return omega_; }
  double period() const;
  int dim() const { return dim_; }
  int max_harmonic() const { return max_k_; }

  /// J_k, or the zero matrix when |k| > K or the harmonic is absent.
  const CMatrix& harmonic(int k) const;
  const std::map<int, CMatrix>& harmonics() const { return harmonics_; }

  /// J(t), real by construction.
  RMatrix eval_J(double t) const;

 private:
  SystemSpec() = default;

  double alpha_ = 1.0;
  double omega_ = 1.0;
  int dim_ = 0;
  int max_k_ = 0;
  std::map<int, CMatrix> harmonics_;
  CMatrix zero_;
};

/// Checks 0 < alpha <= 1.
void validate_order(double alpha);

/// Principal power |w|^alpha exp(i alpha Arg w) with Arg w in (-pi, pi];
/// 0^alpha is 0.
cdouble principal_power(cdouble w, double alpha);

/// Scalar system J(t) = a + b sin(omega t).
SystemSpec scalar_sine_system(double alpha, double a, double b, double omega = 1.0);

/// Two-dimensional Mathieu-type system J(t) = [[0, 1], [c + d sin t, 0]].
SystemSpec mathieu_system(double alpha, double c, double d);

/// Reads a system document. Only k >= 0 harmonics are required; a negative
/// harmonic is accepted only if it is the conjugate of its positive partner.
SystemSpec parse_system(const nlohmann::json& doc);
SystemSpec load_system(const std::filesystem::path& path);

/// Inverse of parse_system (only k >= 0 harmonics are written).
nlohmann::json system_to_json(const SystemSpec& spec);

}  // namespace frachill
