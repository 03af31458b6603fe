#pragma once

#include "frachill/types.hpp"

namespace frachill::specfun {

/// Parameters of the two-parameter Mittag-Leffler function E_{alpha,beta}.
struct MLParams {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;
};

/// Gamma function for real arguments. Throws ErrorKind::Pole at
/// non-positive integers.
double gamma(double x);

/// 1/Gamma(x), defined for every real x (zero at the poles of Gamma).
double rgamma(double x);

/// Upper incomplete gamma function Gamma(a, x) = int_x^inf s^(a-1) e^-s ds,
/// for a in (0, 2) and x >= 0.
double upper_incomplete_gamma(double a, double x);

/// exp(x) * Gamma(a, x); stays finite where Gamma(a, x) alone underflows.
double scaled_upper_incomplete_gamma(double a, double x);

enum class MLRegime { Automatic, Series, Integral, Asymptotic };

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) for |z| <= 1e6.
///
/// The automatic regime picks the truncated power series for small |z|, the
/// asymptotic expansion for large |z| and a Hankel-type contour integral in
/// between; a regime is only accepted when its own error estimate is below
/// the working tolerance, otherwise the next one is tried. Throws
/// ErrorKind::Accuracy when none of them meets the tolerance.
cdouble mittag_leffler(const MLParams& params, cdouble z,
                       MLRegime regime = MLRegime::Automatic);

/// E_{alpha,beta}(scalar * A) for a diagonalizable real matrix A (n <= 4),
/// evaluated through the eigendecomposition of A.
RMatrix ml_matrix(const MLParams& params, const RMatrix& a, double scalar);

}  // namespace frachill::specfun
