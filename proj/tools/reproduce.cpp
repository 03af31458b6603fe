#include "reproduce.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "frachill/error.hpp"
#include "frachill/spectral.hpp"
#include "output.hpp"

namespace frachill::cli {

namespace {

constexpr double kAlpha = 0.5;
constexpr double kA = -1.0;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return v;
}

std::string b_tag(double b) { return b == 1.0 ? "b1" : fmt::format("b{}", b); }

HistoryFunction unit_history() {
  RVector one(1);
  one << 1.0;
  return HistoryFunction(history_kind::Constant{one}, 0.0, 1.0);
}

std::string eig_rows(const std::string& label, const std::vector<Eigenpair>& eps, CsvWriter& csv) {
  for (const Eigenpair& e : eps)
    csv.row({label, fmt_double(e.lambda.real()), fmt_double(e.lambda.imag()), fmt_double(e.residual),
             to_string(e.classification)});
  return csv.text();
}

// Number of distinct real parts among the roots, i.e. groups {lambda + i k omega}.
std::vector<double> group_real_parts(const std::vector<Eigenpair>& eps) {
  std::vector<double> re;
  for (const Eigenpair& e : eps) {
    const double x = e.lambda.real();
    bool seen = false;
    for (double r : re) seen = seen || std::abs(r - x) < 1e-4;
    if (!seen) re.push_back(x);
  }
  return re;
}

}  // namespace

bool ReproduceReport::all_pass() const {
  for (const CheckLine& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string ReproduceReport::text() const {
  std::string out;
  for (const CheckLine& c : checks) out += fmt::format("{} {}: {}\n", c.pass ? "PASS" : "FAIL", c.id, c.detail);
  out += all_pass() ? "overall: PASS\n" : "overall: FAIL\n";
  return out;
}

ReproduceReport reproduce_figures(const std::filesystem::path& outdir, int threads) {
  std::error_code ec;
  std::filesystem::create_directories(outdir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + outdir.string() + ": " + ec.message());

  ReproduceReport report;
  auto check = [&](std::string id, bool pass, std::string detail) {
    spdlog::info("{} {}: {}", pass ? "PASS" : "FAIL", id, detail);
    report.checks.push_back({std::move(id), pass, std::move(detail)});
  };

  // Simulations from the constant history and determinant maps, scalar example.
  for (double b : {1.0, 2.5}) {
    const SystemSpec spec = scalar_sine_system(kAlpha, kA, b);
    Manifest sim_manifest("reproduce/fig2");
    sim_manifest.parameters() = {{"alpha", kAlpha}, {"a", kA}, {"b", b}, {"history", "constant 1"},
                                 {"t_end", 50.0}, {"dt", 0.01}};
    const Trajectory traj = solve_liouville_weyl(spec, unit_history(), 50.0, 0.01, threads);
    emit(outdir / ("fig2_" + b_tag(b) + ".csv"), trajectory_csv(traj), sim_manifest);
    const double y50 = traj.values(0, traj.values.cols() - 1);

    Manifest det_manifest("reproduce/fig4");
    det_manifest.parameters() = {{"alpha", kAlpha}, {"a", kA}, {"b", b}, {"N", 20},
                                 {"re", "0:1:101"}, {"im", "-0.5:0.5:101"}};
    const std::vector<double> re = linspace(0.0, 1.0, 101), im = linspace(-0.5, 0.5, 101);
    const std::vector<HillEvaluation> grid = evaluate_grid(spec, 20, re, im, threads);
    CsvWriter det({"re", "im", "log_abs_det", "sigma_min"});
    for (const HillEvaluation& ev : grid)
      det.row({ev.lambda.real(), ev.lambda.imag(), ev.log_abs_det, ev.sigma_min});
    emit(outdir / ("fig4_" + b_tag(b) + ".csv"), det.text(), det_manifest);

    SearchOptions opt;
    opt.threads = threads;
    const std::vector<Eigenpair> eps = find_eigenvalues(spec, 20, opt);
    if (b == 1.0) {
      bool none = true;
      for (const Eigenpair& e : eps) none = none && e.lambda.real() < 0.0;
      check("AC1 b=1", none && std::abs(y50) < 0.1,
            fmt::format("{} roots with Re >= 0, |y(50)| = {:.6g} (< 0.1)", eps.size(), std::abs(y50)));
    } else {
      int unstable = 0;
      for (const Eigenpair& e : eps) unstable += e.lambda.real() > 0.0 && e.residual < 1e-9;
      const std::string lam = eps.empty() ? "none" : fmt::format("{:.9f}", eps.front().lambda.real());
      check("AC1 b=2.5", unstable >= 1 && std::abs(y50) > 10.0,
            fmt::format("{} roots with Re > 0 (first Re = {}), |y(50)| = {:.6g} (> 10)", unstable, lam,
                        std::abs(y50)));
    }
  }

  // Root scatter over five strips for both examples.
  {
    const SystemSpec ex3 = scalar_sine_system(kAlpha, kA, 2.5);
    SearchOptions opt;
    opt.threads = threads;
    opt.strip = SearchStrip{0.0, gershgorin(ex3, 20).max_radius(), -2.5, 2.5};
    Manifest m("reproduce/fig5");
    m.parameters() = {{"system", "scalar"}, {"alpha", kAlpha}, {"a", kA}, {"b", 2.5}, {"N", 20},
                      {"strip", {opt.strip->re_min, opt.strip->re_max, opt.strip->im_min, opt.strip->im_max}}};
    const std::vector<Eigenpair> eps = find_eigenvalues(ex3, 20, opt);
    CsvWriter csv({"example", "re", "im", "residual", "classification"});
    emit(outdir / "fig5_scalar.csv", eig_rows("scalar", eps, csv), m);
    const auto groups = group_real_parts(eps);
    check("Fig5 scalar", groups.size() == 1 && eps.size() == 5 && groups[0] > 0.0,
          fmt::format("{} roots in {} group(s), spaced by i omega", eps.size(), groups.size()));
  }
  {
    const double alpha = 0.7, c = 0.5, d = 2.0;
    const int order = 10;
    const SystemSpec ex4 = mathieu_system(alpha, c, d);
    const double r = gershgorin(ex4, order).max_radius();
    SearchOptions opt;
    opt.threads = threads;
    opt.strip = SearchStrip{-r, r, -2.5, 2.5};
    Manifest m("reproduce/fig5");
    m.parameters() = {{"system", "mathieu"}, {"alpha", alpha}, {"c", c}, {"d", d}, {"N", order},
                      {"strip", {-r, r, -2.5, 2.5}}};
    const std::vector<Eigenpair> eps = find_eigenvalues(ex4, order, opt);
    CsvWriter csv({"example", "re", "im", "residual", "classification"});
    emit(outdir / "fig5_mathieu.csv", eig_rows("mathieu", eps, csv), m);
    const auto groups = group_real_parts(eps);
    int positive = 0;
    for (double g : groups) positive += g > 0.0;
    check("Fig5 mathieu", groups.size() == 2 && positive == 1,
          fmt::format("{} group(s), {} with positive real part", groups.size(), positive));
  }

  // Floquet trajectory against the simulation started from it.
  {
    const SystemSpec spec = scalar_sine_system(kAlpha, kA, 2.2);
    SearchOptions opt;
    opt.threads = threads;
    const std::vector<Eigenpair> eps = find_eigenvalues(spec, 10, opt);
    if (eps.empty()) {
      check("AC2", false, "no root found for b=2.2, N=10");
    } else {
      const Eigenpair& ep = eps.front();
      const double t_end = 4.0 * std::numbers::pi, dt = 1e-3;
      const Trajectory sim = solve_liouville_weyl(spec, floquet_history(ep, spec), t_end, dt, threads);
      const FloquetReconstruction hill = reconstruct_floquet(ep, spec, sim.times);
      CsvWriter csv({"t", "y_hill", "y_sim"});
      double worst = 0.0;
      for (std::size_t j = 0; j < sim.times.size(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double yh = hill.trajectory.values(0, jj), ys = sim.values(0, jj);
        csv.row({sim.times[j], yh, ys});
        worst = std::max(worst, std::abs(ys - yh) / std::max(1.0, std::abs(yh)));
      }
      Manifest m("reproduce/fig6");
      m.parameters() = {{"alpha", kAlpha}, {"a", kA}, {"b", 2.2}, {"N", 10}, {"t_end", t_end}, {"dt", dt},
                        {"lambda", {ep.lambda.real(), ep.lambda.imag()}}};
      emit(outdir / "fig6.csv", csv.text(), m);
      check("AC2", worst <= 0.05,
            fmt::format("lambda = {:.9f}{:+.3g}i, max relative error {:.3e} (<= 0.05)", ep.lambda.real(),
                        ep.lambda.imag(), worst));
    }
  }

  // Constant-J exactness and the classifier.
  {
    const double a = 2.0;
    double worst = 0.0;
    for (int order : {0, 5, 20}) {
      const SystemSpec spec = SystemSpec::from_nonnegative(kAlpha, 1.0, {{0, CMatrix::Constant(1, 1, a)}});
      worst = std::max(worst, sigma_min_and_nullvector(assemble(spec, order, std::pow(a, 1.0 / kAlpha))).sigma);
    }
    const double th = 3.0 * std::numbers::pi / 8.0;
    CMatrix j0(2, 2);
    j0 << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    const SystemSpec rot = SystemSpec::from_nonnegative(kAlpha, 2.0, {{0, j0}});
    SearchOptions opt;
    opt.threads = threads;
    opt.strip = SearchStrip{-1.5, 1.5, -1.0, 1.0};
    const std::vector<Eigenpair> eps = find_eigenvalues(rot, 3, opt);
    bool negative = !eps.empty();
    for (const Eigenpair& e : eps)
      negative = negative && e.lambda.real() < 0.0 && e.classification == Classification::InvalidNegativeRe;
    check("AC3", worst <= 1e-12 && negative,
          fmt::format("max sigma_min at a^(1/alpha) = {:.3g}; {} root(s) with Re < 0 flagged invalid", worst,
                      eps.size()));

    RMatrix pos(1, 1), neg(1, 1), rot_a(2, 2);
    pos << 1.0;
    neg << -1.0;
    const double q = std::numbers::pi / 4.0;
    rot_a << std::cos(q), -std::sin(q), std::sin(q), std::cos(q);
    const LtiCase c1 = classify_lti(pos, kAlpha).entries.at(0).lti_case;
    const LtiCase c2 = classify_lti(neg, kAlpha).entries.at(0).lti_case;
    const LtiClassification c3 = classify_lti(rot_a, kAlpha);
    bool boundary = true;
    for (const LtiEntry& e : c3.entries) boundary = boundary && e.lti_case == LtiCase::Boundary;
    check("AC4", c1 == LtiCase::A && c2 == LtiCase::C && boundary,
          fmt::format("cases {}, {}, {}", to_string(c1), to_string(c2), boundary ? "boundary" : "not boundary"));
  }

  Manifest m("reproduce/report");
  m.parameters() = {{"outdir", outdir.string()}};
  emit(outdir / "report.txt", report.text(), m);
  return report;
}

}  // namespace frachill::cli
