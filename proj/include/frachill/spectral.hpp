#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frachill/hill.hpp"
#include "frachill/integrator.hpp"
#include "frachill/system.hpp"
#include "frachill/types.hpp"

namespace frachill {

/// Balls |lambda - center_k| <= radius_k, k = -N..N, containing every root
/// of the truncated problem.
struct GershgorinRegion {
  std::vector<cdouble> centers;
  std::vector<double> radii;

  double max_radius() const;
  /// Distance from z to the nearest ball (0 inside).
  double distance(cdouble z) const;
};

/// Per block row: radius = (largest scalar row sum of |entries| in the
/// lambda-independent part)^{1/alpha}. Centers are -i k omega for block row k.
GershgorinRegion gershgorin(const SystemSpec& spec, int order);

enum class Classification { ValidFloquet, InvalidNegativeRe };
std::string to_string(Classification c);

struct Eigenpair {
  cdouble lambda;
  double residual = 0.0;
  /// Fourier vector (p_{-N}, ..., p_N), unit norm and phase fixed.
  CVector p;
  int order = 0;
  Classification classification = Classification::ValidFloquet;
};

/// Rectangle re_min <= Re <= re_max, im_min < Im <= im_max.
struct SearchStrip {
  double re_min = 0.0;
  double re_max = 1.0;
  double im_min = -0.5;
  double im_max = 0.5;
};

struct SearchOptions {
  /// Defaults to Re in [0, max Gershgorin radius], Im in (-omega/2, omega/2].
  std::optional<SearchStrip> strip;
  double tol = 1e-9;
  int grid = 101;
  int threads = 1;
};

SearchStrip default_strip(const SystemSpec& spec, int order);

/// Grid scan of sigma_min, Nelder-Mead refinement of the local minima and a
/// Newton polish on det. The result is sorted by (Re, Im); an empty list
/// means no unstable Floquet solution was found in the strip.
std::vector<Eigenpair> find_eigenvalues(const SystemSpec& spec, int order, const SearchOptions& options = {});

enum class LtiCase { A, B, C, Boundary };
std::string to_string(LtiCase c);

struct LtiEntry {
  cdouble mu;
  LtiCase lti_case = LtiCase::A;
  /// mu^{1/alpha} on the principal branch, present in cases a and b.
  std::optional<cdouble> s;
};

struct LtiClassification {
  double alpha = 1.0;
  std::vector<LtiEntry> entries;
};

/// Eigenvalues mu of A sorted by (Re, Im), each classified by |arg mu|
/// against alpha pi / 2 and alpha pi. |arg mu| within 1e-10 of alpha pi / 2,
/// and mu = 0, are flagged as Boundary.
LtiClassification classify_lti(const RMatrix& a, double alpha);

struct FloquetReconstruction {
  /// Real part of e^{lambda t} sum_k p_k e^{i k omega t}.
  Trajectory trajectory;
  /// Largest imaginary part dropped.
  double imag_residue = 0.0;
};

/// Throws ErrorKind::InvalidClassification for Re lambda < 0.
FloquetReconstruction reconstruct_floquet(const Eigenpair& ep, const SystemSpec& spec,
                                          const std::vector<double>& times);

/// History Re(e^{lambda t} p(t)) on t <= 0 for an eigenpair.
HistoryFunction floquet_history(const Eigenpair& ep, const SystemSpec& spec);

/// Simulates the system from the Floquet history and returns the largest
/// |y_sim - y_Hill|_2 / max(1, |y_Hill|_2) over the grid.
double verify_floquet(const Eigenpair& ep, const SystemSpec& spec, double t_end, double dt, int threads = 1);

}  // namespace frachill
