#include "frachill/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "frachill/error.hpp"
#include "parallel.hpp"

namespace frachill {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sigma_at(const SystemSpec& spec, int order, cdouble lambda) {
  return sigma_min_and_nullvector(assemble(spec, order, lambda)).sigma;
}

struct Refined {
  cdouble lambda;
  double sigma = kInf;
};

// Nelder-Mead on (Re, Im) with the standard coefficients.
Refined nelder_mead(const SystemSpec& spec, int order, cdouble start, double scale, int max_iter) {
  struct Vertex {
    cdouble z;
    double f;
  };
  auto eval = [&](cdouble z) { return Vertex{z, sigma_at(spec, order, z)}; };
  std::array<Vertex, 3> s{eval(start), eval(start + scale), eval(start + cdouble(0.0, scale))};
  const double floor = 1e-15 * std::max(1.0, std::abs(start));
  for (int it = 0; it < max_iter; ++it) {
    std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    const double size = std::max(std::abs(s[1].z - s[0].z), std::abs(s[2].z - s[0].z));
    if (size < floor || s[0].f == 0.0) break;
    const cdouble centroid = 0.5 * (s[0].z + s[1].z);
    const Vertex r = eval(centroid + (centroid - s[2].z));
    if (r.f < s[0].f) {
      const Vertex e = eval(centroid + 2.0 * (centroid - s[2].z));
      s[2] = e.f < r.f ? e : r;
    } else if (r.f < s[1].f) {
      s[2] = r;
    } else {
      const bool outside = r.f < s[2].f;
      const Vertex c = eval(outside ? centroid + 0.5 * (r.z - centroid) : centroid + 0.5 * (s[2].z - centroid));
      if (c.f < std::min(r.f, s[2].f)) {
        s[2] = c;
      } else {
        s[1] = eval(s[0].z + 0.5 * (s[1].z - s[0].z));
        s[2] = eval(s[0].z + 0.5 * (s[2].z - s[0].z));
      }
    }
  }
  const auto best = std::min_element(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  return {best->z, best->f};
}

// Newton on det H(lambda): det'/det = tr(H^{-1} dH/dlambda), and dH/dlambda
// is block diagonal with -alpha (lambda + i r omega)^{alpha-1} I.
Refined newton_polish(const SystemSpec& spec, int order, Refined best, double max_move) {
  const cdouble origin = best.lambda;
  const double a = spec.alpha();
  const int n = spec.dim();
  cdouble z = best.lambda;
  for (int it = 0; it < 12; ++it) {
    const HillMatrix hm = assemble(spec, order, z);
    const Eigen::PartialPivLU<CMatrix> lu(hm.matrix);
    if ((lu.matrixLU().diagonal().array() == cdouble(0.0, 0.0)).any()) break;
    const CMatrix inv = lu.inverse();
    cdouble tr = 0.0;
    bool ok = true;
    for (int r = -order; r <= order; ++r) {
      const cdouble w = z + cdouble(0.0, r * spec.omega());
      if (std::abs(w) == 0.0) {
        ok = false;
        break;
      }
      const cdouble dshift = -a * principal_power(w, a) / w;
      for (int i = 0; i < n; ++i) {
        const Eigen::Index idx = static_cast<Eigen::Index>(r + order) * n + i;
        tr += inv(idx, idx) * dshift;
      }
    }
    if (!ok || tr == cdouble(0.0, 0.0) || !std::isfinite(std::abs(tr))) break;
    const cdouble step = 1.0 / tr;
    z -= step;
    if (std::abs(z - origin) > max_move) break;
    const double f = sigma_at(spec, order, z);
    if (f < best.sigma) best = {z, f};
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  return best;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    v[static_cast<std::size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return v;
}

double arg_closed(cdouble z) {
  double t = std::arg(z);
  if (t == -std::numbers::pi) t = std::numbers::pi;
  return t;
}

}  // namespace

double GershgorinRegion::max_radius() const {
  return radii.empty() ? 0.0 : *std::max_element(radii.begin(), radii.end());
}

double GershgorinRegion::distance(cdouble z) const {
  double d = kInf;
  for (std::size_t k = 0; k < centers.size(); ++k) d = std::min(d, std::max(0.0, std::abs(z - centers[k]) - radii[k]));
  return d;
}

GershgorinRegion gershgorin(const SystemSpec& spec, int order) {
  if (order < 0) fail(ErrorKind::Domain, "truncation order N must be non-negative");
  const int n = spec.dim();
  GershgorinRegion g;
  for (int r = -order; r <= order; ++r) {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(n);
    for (int c = -order; c <= order; ++c) {
      const int k = r - c;
      if (std::abs(k) > spec.max_harmonic()) continue;
      rows += spec.harmonic(k).cwiseAbs().rowwise().sum();
    }
    g.centers.emplace_back(0.0, -r * spec.omega());
    g.radii.push_back(std::pow(rows.maxCoeff(), 1.0 / spec.alpha()));
  }
  return g;
}

std::string to_string(Classification c) {
  return c == Classification::ValidFloquet ? "valid-floquet" : "invalid-negative-re";
}

SearchStrip default_strip(const SystemSpec& spec, int order) {
  double re_max = gershgorin(spec, order).max_radius();
  // A zero system has all roots on the imaginary axis; keep the scan non-degenerate.
  if (re_max < 1e-12 * spec.omega()) re_max = 0.1 * spec.omega();
  return {0.0, re_max, -0.5 * spec.omega(), 0.5 * spec.omega()};
}

std::vector<Eigenpair> find_eigenvalues(const SystemSpec& spec, int order, const SearchOptions& options) {
  const SearchStrip strip = options.strip.value_or(default_strip(spec, order));
  if (!(strip.re_max >= strip.re_min) || !(strip.im_max > strip.im_min))
    fail(ErrorKind::Domain, "search strip is empty");
  if (options.grid < 3) fail(ErrorKind::Domain, "search grid needs at least 3 points per axis");
  if (!(options.tol > 0.0)) fail(ErrorKind::Domain, "tolerance must be positive");

  const int m = options.grid;
  const std::vector<double> re = linspace(strip.re_min, strip.re_max, m);
  const std::vector<double> im = linspace(strip.im_min, strip.im_max, m);
  std::vector<double> sig(static_cast<std::size_t>(m) * m);
  detail::parallel_for(sig.size(), options.threads, [&](std::size_t idx) {
    sig[idx] = sigma_at(spec, order, cdouble(re[idx / m], im[idx % m]));
  });

  std::vector<double> sorted = sig;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double threshold = 0.5 * sorted[sorted.size() / 2];

  auto at = [&](int i, int j) { return sig[static_cast<std::size_t>(i) * m + j]; };
  std::vector<cdouble> seeds;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double f = at(i, j);
      if (!(f < threshold)) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di, jj = j + dj;
          if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= m || jj >= m) continue;
          // Ties are broken by index so a flat pair yields one seed.
          const double g = at(ii, jj);
          if (g < f || (g == f && (ii < i || (ii == i && jj < j)))) {
            is_min = false;
            break;
          }
        }
      if (is_min) seeds.emplace_back(re[i], im[j]);
    }
  }

  const double h_re = (strip.re_max - strip.re_min) / (m - 1);
  const double h_im = (strip.im_max - strip.im_min) / (m - 1);
  const double spacing = std::max(h_re, h_im);
  std::vector<Refined> refined(seeds.size());
  detail::parallel_for(seeds.size(), options.threads, [&](std::size_t s) {
    Refined r = nelder_mead(spec, order, seeds[s], 0.1 * spacing, 500);
    if (r.sigma > 0.0) r = newton_polish(spec, order, r, spacing);
    refined[s] = r;
  });

  std::sort(refined.begin(), refined.end(), [](const Refined& a, const Refined& b) {
    return a.lambda.real() < b.lambda.real() ||
           (a.lambda.real() == b.lambda.real() && a.lambda.imag() < b.lambda.imag());
  });
  const double slack = 1e-6 * std::max(1.0, spacing);
  std::vector<Eigenpair> out;
  for (const Refined& r : refined) {
    if (!(r.sigma <= options.tol)) continue;
    const double x = r.lambda.real(), y = r.lambda.imag();
    if (x < strip.re_min - slack || x > strip.re_max + slack) continue;
    if (y <= strip.im_min + 1e-9 || y > strip.im_max + 1e-9) continue;
    const bool dup = std::any_of(out.begin(), out.end(),
                                 [&](const Eigenpair& e) { return std::abs(e.lambda - r.lambda) < 1e-6; });
    if (dup) continue;
    Eigenpair ep;
    ep.lambda = r.lambda;
    ep.order = order;
    const NullPair np = sigma_min_and_nullvector(assemble(spec, order, r.lambda));
    ep.residual = np.sigma;
    ep.p = np.v;
    ep.classification = x < -options.tol ? Classification::InvalidNegativeRe : Classification::ValidFloquet;
    out.push_back(std::move(ep));
  }
  return out;
}

std::string to_string(LtiCase c) {
  switch (c) {
    case LtiCase::A: return "a";
    case LtiCase::B: return "b";
    case LtiCase::C: return "c";
    case LtiCase::Boundary: return "boundary";
  }
  return "?";
}

LtiClassification classify_lti(const RMatrix& a, double alpha) {
  validate_order(alpha);
  if (a.rows() == 0 || a.rows() != a.cols()) fail(ErrorKind::DimensionMismatch, "A must be a non-empty square matrix");
  if (a.rows() > 4) fail(ErrorKind::DimensionMismatch, "A must be at most 4x4");
  if (!a.allFinite()) fail(ErrorKind::Domain, "A must be finite");
  const Eigen::EigenSolver<RMatrix> es(a, false);
  std::vector<cdouble> mus(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(mus.begin(), mus.end(), [](cdouble x, cdouble y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });

  LtiClassification out;
  out.alpha = alpha;
  const double half = 0.5 * alpha * std::numbers::pi;
  for (const cdouble mu : mus) {
    LtiEntry e;
    e.mu = mu;
    const double th = std::abs(arg_closed(mu));
    if (std::abs(mu) == 0.0 || std::abs(th - half) < 1e-10) {
      e.lti_case = LtiCase::Boundary;
    } else if (th < half) {
      e.lti_case = LtiCase::A;
    } else if (th <= alpha * std::numbers::pi) {
      e.lti_case = LtiCase::B;
    } else {
      e.lti_case = LtiCase::C;
    }
    if (e.lti_case == LtiCase::A || e.lti_case == LtiCase::B)
      e.s = std::polar(std::pow(std::abs(mu), 1.0 / alpha), arg_closed(mu) / alpha);
    out.entries.push_back(e);
  }
  return out;
}

FloquetReconstruction reconstruct_floquet(const Eigenpair& ep, const SystemSpec& spec,
                                          const std::vector<double>& times) {
  if (ep.lambda.real() < 0.0 || ep.classification == Classification::InvalidNegativeRe)
    fail(ErrorKind::InvalidClassification, "Floquet form needs Re lambda >= 0");
  const int n = spec.dim();
  const int blocks = 2 * ep.order + 1;
  if (ep.p.size() != static_cast<Eigen::Index>(n) * blocks)
    fail(ErrorKind::DimensionMismatch, "eigenvector length does not match n (2N + 1)");

  FloquetReconstruction out;
  out.trajectory.times = times;
  out.trajectory.scheme = "floquet";
  out.trajectory.values.resize(n, static_cast<Eigen::Index>(times.size()));
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double t = times[j];
    CVector y = CVector::Zero(n);
    for (int k = -ep.order; k <= ep.order; ++k)
      y += ep.p.segment(static_cast<Eigen::Index>(k + ep.order) * n, n) *
           std::exp(cdouble(0.0, k * spec.omega() * t));
    y *= std::exp(ep.lambda * t);
    out.trajectory.values.col(static_cast<Eigen::Index>(j)) = y.real();
    out.imag_residue = std::max(out.imag_residue, y.imag().cwiseAbs().maxCoeff());
  }
  if (times.size() > 1) out.trajectory.dt = times[1] - times[0];
  return out;
}

HistoryFunction floquet_history(const Eigenpair& ep, const SystemSpec& spec) {
  if (ep.lambda.real() < 0.0 || ep.classification == Classification::InvalidNegativeRe)
    fail(ErrorKind::InvalidClassification, "Floquet form needs Re lambda >= 0");
  const int n = spec.dim();
  if (ep.p.size() != static_cast<Eigen::Index>(n) * (2 * ep.order + 1))
    fail(ErrorKind::DimensionMismatch, "eigenvector length does not match n (2N + 1)");
  if (!(ep.p.norm() > 0.0)) fail(ErrorKind::Domain, "eigenvector must be non-zero");
  history_kind::FloquetForm f;
  f.lambda = ep.lambda;
  f.omega = spec.omega();
  for (int k = -ep.order; k <= ep.order; ++k) {
    const CVector block = ep.p.segment(static_cast<Eigen::Index>(k + ep.order) * n, n);
    if (block.norm() > 0.0) f.coeffs[k] = block;
  }
  return HistoryFunction(std::move(f), 0.0, 1.0);
}

double verify_floquet(const Eigenpair& ep, const SystemSpec& spec, double t_end, double dt, int threads) {
  const HistoryFunction hist = floquet_history(ep, spec);
  const Trajectory sim = solve_liouville_weyl(spec, hist, t_end, dt, threads);
  const FloquetReconstruction hill = reconstruct_floquet(ep, spec, sim.times);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < sim.values.cols(); ++j) {
    const double ref = hill.trajectory.values.col(j).norm();
    worst = std::max(worst, (sim.values.col(j) - hill.trajectory.values.col(j)).norm() / std::max(1.0, ref));
  }
  return worst;
}

}  // namespace frachill
