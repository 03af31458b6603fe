#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "frachill/error.hpp"
#include "frachill/hill.hpp"
#include "frachill/integrator.hpp"
#include "frachill/specfun.hpp"
#include "frachill/spectral.hpp"
#include "output.hpp"
#include "reproduce.hpp"

namespace frachill::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// A search that found nothing to work with; reported like a numerical failure.
struct NoRoot : std::runtime_error {
  NoRoot() : std::runtime_error("no unstable Floquet solution found") {}
};

void setup_logging() {
  auto logger = spdlog::get("frachill");
  if (!logger) {
    logger = spdlog::stderr_color_mt("frachill");
    spdlog::set_default_logger(logger);
  }
  const char* env = std::getenv("FRACHILL_LOG");
  const std::string level = env ? env : "quiet";
  if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else if (level == "info") {
    spdlog::set_level(spdlog::level::info);
  } else {
    spdlog::set_level(spdlog::level::warn);
  }
}

double to_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) fail(ErrorKind::Schema, "cannot parse " + what + " '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return parts;
    start = pos + 1;
  }
}

// Writes to the file with a manifest, or to stdout without one.
void deliver(const std::string& out, const std::string& text, const Manifest& manifest) {
  if (out.empty()) {
    std::cout << text;
  } else {
    emit(out, text, manifest);
  }
}

RMatrix load_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Schema, path.string() + ": " + e.what());
  }
  const json& m = doc.is_object() && doc.contains("matrix") ? doc["matrix"] : doc;
  if (!m.is_array() || m.empty() || !m[0].is_array()) fail(ErrorKind::Schema, "matrix must be an array of rows");
  const std::size_t rows = m.size(), cols = m[0].size();
  RMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!m[i].is_array() || m[i].size() != cols) fail(ErrorKind::Schema, "matrix rows must have equal length");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!m[i][j].is_number()) fail(ErrorKind::Schema, "matrix entries must be numbers");
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j].get<double>();
    }
  }
  return a;
}

std::optional<SearchStrip> parse_strip(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto parts = split(text, ':');
  if (parts.size() != 4) fail(ErrorKind::Schema, "strip must be re0:re1:im0:im1");
  return SearchStrip{to_number(parts[0], "strip"), to_number(parts[1], "strip"), to_number(parts[2], "strip"),
                     to_number(parts[3], "strip")};
}

struct Globals {
  int threads = 1;
  long seed = 0;
};

struct SearchArgs {
  std::string system;
  int order = 10;
  double tol = 1e-9;
  std::string strip;
  int grid = 101;

  void add(CLI::App* sub, int default_order) {
    order = default_order;
    sub->add_option("--system", system, "system JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--N", order, "truncation order")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", tol, "residual tolerance on sigma_min")->capture_default_str();
    sub->add_option("--strip", strip, "search rectangle re0:re1:im0:im1");
    sub->add_option("--grid", grid, "scan points per axis")->capture_default_str();
  }

  SearchOptions options(const Globals& g) const {
    SearchOptions o;
    o.strip = parse_strip(strip);
    o.tol = tol;
    o.grid = grid;
    o.threads = g.threads;
    return o;
  }

  void record(Manifest& m) const {
    m.add_input(system);
    m.parameters()["N"] = order;
    m.parameters()["tol"] = tol;
    m.parameters()["grid"] = grid;
    if (!strip.empty()) m.parameters()["strip"] = strip;
  }
};

std::vector<Eigenpair> valid_only(std::vector<Eigenpair> eps) {
  std::erase_if(eps, [](const Eigenpair& e) { return e.classification != Classification::ValidFloquet; });
  return eps;
}

int report_error(const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
  return code;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Schema:
    case ErrorKind::Symmetry:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::Domain:
      return 2;
    default:
      return 1;
  }
}

}  // namespace

cdouble parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  if (s.empty()) fail(ErrorKind::Schema, "empty complex number");
  if (s.back() != 'i' && s.back() != 'j') return {to_number(s, "complex number"), 0.0};
  s.pop_back();
  // Split at the last sign that is not a leading sign or part of an exponent.
  std::size_t cut = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  }
  auto imag_of = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return to_number(t, "imaginary part");
  };
  if (cut == std::string::npos) return {0.0, imag_of(s)};
  return {to_number(s.substr(0, cut), "real part"), imag_of(s.substr(cut))};
}

Range parse_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) fail(ErrorKind::Schema, "range must be lo:hi:count");
  Range r{to_number(parts[0], "range"), to_number(parts[1], "range"),
          static_cast<int>(to_number(parts[2], "range count"))};
  if (r.count < 1 || static_cast<double>(r.count) != to_number(parts[2], "range count"))
    fail(ErrorKind::Schema, "range count must be a positive integer");
  if (r.count == 1 && r.lo != r.hi) fail(ErrorKind::Schema, "a single-point range needs lo == hi");
  return r;
}

std::vector<double> expand(const Range& r) {
  std::vector<double> v(static_cast<std::size_t>(r.count));
  for (int i = 0; i < r.count; ++i)
    v[static_cast<std::size_t>(i)] = r.count == 1 ? r.lo : r.lo + (r.hi - r.lo) * i / (r.count - 1);
  return v;
}

int run(int argc, const char* const* argv) {
  setup_logging();
  CLI::App app{"Stability of periodic solutions of fractional-order linear systems", "frachill"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  g.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "reserved; no stochastic components");
  app.set_version_flag("--version", kVersion);

  std::function<void()> action;

  // ml
  double ml_alpha = 1.0, ml_beta = 1.0;
  std::string ml_z;
  auto* ml = app.add_subcommand("ml", "Mittag-Leffler function E_{alpha,beta}(z)");
  ml->add_option("--alpha", ml_alpha)->required();
  ml->add_option("--beta", ml_beta)->capture_default_str();
  ml->add_option("--z", ml_z, "argument, e.g. 1.5-2i")->required();
  ml->callback([&] {
    action = [&] {
      const cdouble v = specfun::mittag_leffler({ml_alpha, ml_beta}, parse_complex(ml_z));
      std::cout << fmt_double(v.real()) << "," << fmt_double(v.imag()) << "\n";
    };
  });

  // simulate
  std::string sim_system, sim_history, sim_out;
  double sim_t_end = 0.0, sim_dt = 0.01;
  auto* sim = app.add_subcommand("simulate", "Integrate the system from an initial function");
  sim->add_option("--system", sim_system)->required()->check(CLI::ExistingFile);
  sim->add_option("--history", sim_history)->required()->check(CLI::ExistingFile);
  sim->add_option("--t-end", sim_t_end)->required();
  sim->add_option("--dt", sim_dt)->capture_default_str();
  sim->add_option("--out", sim_out, "CSV output (stdout if omitted)");
  sim->callback([&] {
    action = [&] {
      Manifest m("simulate");
      m.add_input(sim_system);
      m.add_input(sim_history);
      m.parameters() = {{"t_end", sim_t_end}, {"dt", sim_dt}, {"threads", g.threads}};
      const SystemSpec spec = load_system(sim_system);
      const HistoryFunction hist = load_history(sim_history);
      const Trajectory traj = solve_liouville_weyl(spec, hist, sim_t_end, sim_dt, g.threads);
      deliver(sim_out, trajectory_csv(traj), m);
    };
  });

  // forcing
  std::string fo_history, fo_t, fo_out;
  double fo_alpha = 0.5;
  bool fo_bound = false;
  auto* fo = app.add_subcommand("forcing", "Forcing term of an initial function");
  fo->add_option("--history", fo_history)->required()->check(CLI::ExistingFile);
  fo->add_option("--alpha", fo_alpha)->required();
  fo->add_option("--t", fo_t, "evaluation times lo:hi:count")->required();
  fo->add_option("--out", fo_out, "CSV output (stdout if omitted)");
  fo->add_flag("--bound", fo_bound, "append the decay-bound column C (t - t0 + eta)^-alpha");
  fo->callback([&] {
    action = [&] {
      Manifest m("forcing");
      m.add_input(fo_history);
      m.parameters() = {{"alpha", fo_alpha}, {"t", fo_t}, {"bound", fo_bound}};
      const HistoryFunction hist = load_history(fo_history);
      const ForcingEvaluator fe(hist, fo_alpha);
      const std::vector<double> ts = expand(parse_range(fo_t));
      std::vector<std::string> header{"t"};
      for (int i = 0; i < hist.dim(); ++i) header.push_back("F" + std::to_string(i + 1));
      if (fo_bound) header.push_back("bound");
      std::vector<RVector> vals(ts.size());
      for (std::size_t j = 0; j < ts.size(); ++j) vals[j] = fe(ts[j]);
      const double c = fo_bound ? fe.bound_constant() : 0.0;
      CsvWriter csv(header);
      for (std::size_t j = 0; j < ts.size(); ++j) {
        std::vector<double> row{ts[j]};
        for (Eigen::Index i = 0; i < vals[j].size(); ++i) row.push_back(vals[j](i));
        if (fo_bound) row.push_back(c * std::pow(ts[j] - hist.t0() + hist.eta(), -fo_alpha));
        csv.row(row);
      }
      deliver(fo_out, csv.text(), m);
    };
  });

  // hill-det
  std::string hd_system, hd_re, hd_im, hd_out;
  int hd_order = 20;
  auto* hd = app.add_subcommand("hill-det", "log|det| and sigma_min of the Hill matrix on a grid");
  hd->add_option("--system", hd_system)->required()->check(CLI::ExistingFile);
  hd->add_option("--N", hd_order)->capture_default_str()->check(CLI::NonNegativeNumber);
  hd->add_option("--re", hd_re, "lo:hi:count")->required();
  hd->add_option("--im", hd_im, "lo:hi:count")->required();
  hd->add_option("--out", hd_out, "CSV output (stdout if omitted)");
  hd->callback([&] {
    action = [&] {
      Manifest m("hill-det");
      m.add_input(hd_system);
      m.parameters() = {{"N", hd_order}, {"re", hd_re}, {"im", hd_im}};
      const SystemSpec spec = load_system(hd_system);
      const auto grid = evaluate_grid(spec, hd_order, expand(parse_range(hd_re)), expand(parse_range(hd_im)),
                                      g.threads);
      CsvWriter csv({"re", "im", "log_abs_det", "sigma_min"});
      for (const HillEvaluation& ev : grid) csv.row({ev.lambda.real(), ev.lambda.imag(), ev.log_abs_det, ev.sigma_min});
      deliver(hd_out, csv.text(), m);
    };
  });

  // eig
  SearchArgs eig_args;
  std::string eig_out;
  auto* eig = app.add_subcommand("eig", "Roots of the truncated fractional Hill problem");
  eig_args.add(eig, 20);
  eig->add_option("--out", eig_out, "CSV output (stdout if omitted)");
  eig->callback([&] {
    action = [&] {
      Manifest m("eig");
      eig_args.record(m);
      const SystemSpec spec = load_system(eig_args.system);
      const auto eps = find_eigenvalues(spec, eig_args.order, eig_args.options(g));
      CsvWriter csv({"re", "im", "residual", "classification"});
      for (const Eigenpair& e : eps)
        csv.row({fmt_double(e.lambda.real()), fmt_double(e.lambda.imag()), fmt_double(e.residual),
                 to_string(e.classification)});
      deliver(eig_out, csv.text(), m);
      if (valid_only(eps).empty()) spdlog::warn("no unstable Floquet solution found");
    };
  });

  // floquet
  SearchArgs fl_args;
  std::string fl_out;
  double fl_t_end = 0.0, fl_dt = 0.01;
  std::size_t fl_index = 0;
  auto* fl = app.add_subcommand("floquet", "Floquet-form trajectory of a root");
  fl_args.add(fl, 10);
  fl->add_option("--t-end", fl_t_end)->required();
  fl->add_option("--dt", fl_dt)->capture_default_str();
  fl->add_option("--index", fl_index, "which valid root, in (Re, Im) order")->capture_default_str();
  fl->add_option("--out", fl_out, "CSV output (stdout if omitted)");
  fl->callback([&] {
    action = [&] {
      Manifest m("floquet");
      fl_args.record(m);
      m.parameters()["t_end"] = fl_t_end;
      m.parameters()["dt"] = fl_dt;
      m.parameters()["index"] = fl_index;
      const SystemSpec spec = load_system(fl_args.system);
      const auto eps = valid_only(find_eigenvalues(spec, fl_args.order, fl_args.options(g)));
      if (fl_index >= eps.size()) throw NoRoot();
      if (!(fl_dt > 0.0) || !(fl_t_end > 0.0)) fail(ErrorKind::Domain, "t-end and dt must be positive");
      std::vector<double> ts;
      const auto steps = static_cast<std::size_t>(std::floor(fl_t_end / fl_dt + 1e-9));
      for (std::size_t j = 0; j <= steps; ++j) ts.push_back(static_cast<double>(j) * fl_dt);
      const Eigenpair& ep = eps[fl_index];
      m.parameters()["lambda"] = {ep.lambda.real(), ep.lambda.imag()};
      deliver(fl_out, trajectory_csv(reconstruct_floquet(ep, spec, ts).trajectory), m);
    };
  });

  // verify
  SearchArgs vf_args;
  double vf_t_end = 12.56, vf_dt = 1e-3;
  auto* vf = app.add_subcommand("verify", "Compare Floquet trajectories with simulations");
  vf_args.add(vf, 10);
  vf->add_option("--t-end", vf_t_end)->capture_default_str();
  vf->add_option("--dt", vf_dt)->capture_default_str();
  vf->callback([&] {
    action = [&] {
      const SystemSpec spec = load_system(vf_args.system);
      const auto eps = valid_only(find_eigenvalues(spec, vf_args.order, vf_args.options(g)));
      std::cout << "lambda_re,lambda_im,max_rel_err\n";
      for (const Eigenpair& e : eps)
        std::cout << fmt_double(e.lambda.real()) << "," << fmt_double(e.lambda.imag()) << ","
                  << fmt_double(verify_floquet(e, spec, vf_t_end, vf_dt, g.threads)) << "\n";
      if (eps.empty()) spdlog::warn("no unstable Floquet solution found");
    };
  });

  // lti
  double lti_alpha = 0.5;
  std::string lti_matrix;
  auto* lti = app.add_subcommand("lti", "Classify the exponential solutions of D^alpha x = A x");
  lti->add_option("--alpha", lti_alpha)->required();
  lti->add_option("--matrix", lti_matrix, "JSON array of rows, or {\"matrix\": ...}")
      ->required()
      ->check(CLI::ExistingFile);
  lti->callback([&] {
    action = [&] {
      const LtiClassification c = classify_lti(load_matrix(lti_matrix), lti_alpha);
      std::cout << "mu_re,mu_im,case,s_re,s_im\n";
      for (const LtiEntry& e : c.entries) {
        std::cout << fmt_double(e.mu.real()) << "," << fmt_double(e.mu.imag()) << "," << to_string(e.lti_case);
        if (e.s) {
          std::cout << "," << fmt_double(e.s->real()) << "," << fmt_double(e.s->imag()) << "\n";
        } else {
          std::cout << ",,\n";
        }
      }
    };
  });

  // reproduce
  std::string rp_outdir;
  int rp_status = 0;
  auto* rp = app.add_subcommand("reproduce", "Regenerate the figure data and the acceptance report");
  rp->add_option("--outdir", rp_outdir)->required();
  rp->callback([&] {
    action = [&] {
      const ReproduceReport report = reproduce_figures(rp_outdir, g.threads);
      std::cout << report.text();
      rp_status = report.all_pass() ? 0 : 1;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), 2);
  }

  try {
    if (action) action();
    return rp_status;
  } catch (const Error& e) {
    return report_error(std::string(to_string(e.kind())), e.what(), exit_code(e.kind()));
  } catch (const NoRoot& e) {
    return report_error("no_root", e.what(), 1);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), 1);
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("frachill");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace frachill::cli
