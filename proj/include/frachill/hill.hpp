#pragma once

#include <vector>

#include "frachill/system.hpp"
#include "frachill/types.hpp"

namespace frachill {

/// Truncated fractional Hill matrix of order N at a given lambda. Block
/// (r, c), r, c in -N..N, is J_{r-c}; diagonal block r is
/// J_0 - (lambda + i r omega)^alpha I.
struct HillMatrix {
  int dim = 0;
  int order = 0;
  double alpha = 1.0;
  double omega = 1.0;
  cdouble lambda;
  CMatrix matrix;

  Eigen::Index size() const { return matrix.rows(); }
};

struct HillEvaluation {
  cdouble lambda;
  /// -infinity when an LU pivot is exactly zero.
  double log_abs_det = 0.0;
  cdouble det_phase{1.0, 0.0};
  double sigma_min = 0.0;
};

struct NullPair {
  double sigma = 0.0;
  /// Unit right singular vector; its largest-magnitude entry is real positive.
  CVector v;
};

HillMatrix assemble(const SystemSpec& spec, int order, cdouble lambda);

/// log|det| and phase from an LU factorization with partial pivoting.
/// sigma_min is left at zero; use evaluate() for both.
HillEvaluation log_abs_det(const HillMatrix& hm);

/// Smallest singular value and right singular vector by inverse iteration on
/// H^H H, falling back to a full SVD when the iteration does not settle.
/// Throws ErrorKind::IterationFailure if neither produces a finite result.
NullPair sigma_min_and_nullvector(const HillMatrix& hm);

/// Determinant and smallest singular value sharing one factorization.
HillEvaluation evaluate(const SystemSpec& spec, int order, cdouble lambda);

/// Row-major grid: all imaginary parts for re[0], then re[1], ...
std::vector<HillEvaluation> evaluate_grid(const SystemSpec& spec, int order,
                                          const std::vector<double>& re,
                                          const std::vector<double>& im, int threads = 1);

}  // namespace frachill
