#include "frachill/hill.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "frachill/error.hpp"
#include "parallel.hpp"

namespace frachill {

namespace {

using Lu = Eigen::PartialPivLU<CMatrix>;

bool has_zero_pivot(const Lu& lu) {
  const auto d = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (d(i) == cdouble(0.0, 0.0)) return true;
  return false;
}

void fix_phase(CVector& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const double m = std::abs(v(imax));
  if (m > 0.0) v *= std::conj(v(imax)) / m;
  v(imax) = cdouble(v(imax).real(), 0.0);
}

// Fixed start vector so the result does not depend on a random state.
CVector start_vector(Eigen::Index n) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double k = static_cast<double>(i + 1);
    v(i) = cdouble(std::cos(1.3 * k) + 1.1, std::sin(0.7 * k));
  }
  return v.normalized();
}

NullPair by_svd(const CMatrix& h) {
  Eigen::BDCSVD<CMatrix> svd(h, Eigen::ComputeThinV);
  const Eigen::Index last = svd.singularValues().size() - 1;
  NullPair out{svd.singularValues()(last), svd.matrixV().col(last)};
  if (!std::isfinite(out.sigma) || !out.v.allFinite())
    fail(ErrorKind::IterationFailure, "singular value decomposition did not produce a finite result");
  fix_phase(out.v);
  return out;
}

NullPair null_pair(const CMatrix& h, const Lu& lu) {
  if (!h.allFinite()) fail(ErrorKind::IterationFailure, "Hill matrix has non-finite entries");
  if (has_zero_pivot(lu)) return by_svd(h);

  const double scale = h.cwiseAbs().rowwise().sum().maxCoeff();
  CVector v = start_vector(h.rows());
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    const CVector x = lu.solve(CVector(lu.adjoint().solve(v)));
    const double nx = x.norm();
    if (!std::isfinite(nx) || nx == 0.0) break;
    v = x / nx;
    const double sigma = (h * v).norm();
    if (std::abs(sigma - prev) <= 1e-12 * sigma + 4.0 * std::numeric_limits<double>::epsilon() * scale) {
      NullPair out{sigma, v};
      fix_phase(out.v);
      return out;
    }
    prev = sigma;
  }
  // Clustered singular values make the iteration crawl; finish with a full SVD.
  return by_svd(h);
}

HillEvaluation det_from_lu(const Lu& lu, cdouble lambda) {
  HillEvaluation ev;
  ev.lambda = lambda;
  const auto d = lu.matrixLU().diagonal();
  double log_abs = 0.0;
  cdouble phase(lu.permutationP().determinant(), 0.0);
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double m = std::abs(d(i));
    if (m == 0.0) {
      ev.log_abs_det = -std::numeric_limits<double>::infinity();
      return ev;
    }
    log_abs += std::log(m);
    phase *= d(i) / m;
  }
  ev.log_abs_det = log_abs;
  ev.det_phase = phase / std::abs(phase);
  return ev;
}

}  // namespace

HillMatrix assemble(const SystemSpec& spec, int order, cdouble lambda) {
  if (order < 0) fail(ErrorKind::Domain, "truncation order N must be non-negative");
  const int n = spec.dim();
  const int blocks = 2 * order + 1;
  HillMatrix hm;
  hm.dim = n;
  hm.order = order;
  hm.alpha = spec.alpha();
  hm.omega = spec.omega();
  hm.lambda = lambda;
  hm.matrix = CMatrix::Zero(static_cast<Eigen::Index>(n) * blocks, static_cast<Eigen::Index>(n) * blocks);
  for (int r = -order; r <= order; ++r) {
    for (int c = -order; c <= order; ++c) {
      const int k = r - c;
      if (std::abs(k) > spec.max_harmonic()) continue;
      hm.matrix.block((r + order) * n, (c + order) * n, n, n) = spec.harmonic(k);
    }
    const cdouble shift = principal_power(lambda + cdouble(0.0, r * spec.omega()), spec.alpha());
    for (int i = 0; i < n; ++i) hm.matrix((r + order) * n + i, (r + order) * n + i) -= shift;
  }
  return hm;
}

HillEvaluation log_abs_det(const HillMatrix& hm) {
  const Lu lu(hm.matrix);
  return det_from_lu(lu, hm.lambda);
}

NullPair sigma_min_and_nullvector(const HillMatrix& hm) {
  const Lu lu(hm.matrix);
  return null_pair(hm.matrix, lu);
}

HillEvaluation evaluate(const SystemSpec& spec, int order, cdouble lambda) {
  const HillMatrix hm = assemble(spec, order, lambda);
  const Lu lu(hm.matrix);
  HillEvaluation ev = det_from_lu(lu, lambda);
  ev.sigma_min = null_pair(hm.matrix, lu).sigma;
  return ev;
}

std::vector<HillEvaluation> evaluate_grid(const SystemSpec& spec, int order, const std::vector<double>& re,
                                          const std::vector<double>& im, int threads) {
  std::vector<HillEvaluation> out(re.size() * im.size());
  detail::parallel_for(out.size(), threads, [&](std::size_t idx) {
    const std::size_t i = idx / im.size();
    const std::size_t j = idx % im.size();
    out[idx] = evaluate(spec, order, cdouble(re[i], im[j]));
  });
  return out;
}

}  // namespace frachill
