#include "frachill/system.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "frachill/error.hpp"
#include "json_util.hpp"

namespace frachill {

using nlohmann::json;

void validate_order(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    fail(ErrorKind::Domain, "fractional order alpha must lie in (0, 1]");
}

cdouble principal_power(cdouble w, double alpha) {
  const double r = std::abs(w);
  if (r == 0.0) return {0.0, 0.0};
  double arg = std::arg(w);
  // std::arg gives -pi for (-x, -0.0); the branch is closed on the upper side.
  if (arg == -std::numbers::pi) arg = std::numbers::pi;
  return std::polar(std::pow(r, alpha), alpha * arg);
}

SystemSpec SystemSpec::from_nonnegative(double alpha, double omega,
                                        const std::map<int, CMatrix>& harmonics) {
  validate_order(alpha);
  if (!(omega > 0.0) || !std::isfinite(omega))
    fail(ErrorKind::Domain, "omega must be positive and finite");
  auto j0 = harmonics.find(0);
  if (j0 == harmonics.end()) fail(ErrorKind::Schema, "harmonic J_0 is mandatory");
  const Eigen::Index n = j0->second.rows();
  if (n == 0 || j0->second.cols() != n)
    fail(ErrorKind::DimensionMismatch, "J_0 must be a non-empty square matrix");
  if (j0->second.imag().cwiseAbs().maxCoeff() != 0.0)
    fail(ErrorKind::Symmetry, "J_0 must be real");

  SystemSpec spec;
  spec.alpha_ = alpha;
  spec.omega_ = omega;
  spec.dim_ = static_cast<int>(n);
  spec.zero_ = CMatrix::Zero(n, n);
  for (const auto& [k, m] : harmonics) {
    if (k < 0) fail(ErrorKind::Schema, "only k >= 0 harmonics may be given");
    if (m.rows() != n || m.cols() != n)
      fail(ErrorKind::DimensionMismatch, "harmonic J_" + std::to_string(k) + " has wrong size");
    if (!m.allFinite()) fail(ErrorKind::Domain, "harmonic entries must be finite");
    spec.harmonics_[k] = m;
    if (k > 0) spec.harmonics_[-k] = m.conjugate();
    spec.max_k_ = std::max(spec.max_k_, k);
  }
  return spec;
}

double SystemSpec::period() const { return 2.0 * std::numbers::pi / omega_; }

const CMatrix& SystemSpec::harmonic(int k) const {
  auto it = harmonics_.find(k);
  return it == harmonics_.end() ? zero_ : it->second;
}

RMatrix SystemSpec::eval_J(double t) const {
  CMatrix sum = CMatrix::Zero(dim_, dim_);
  for (const auto& [k, m] : harmonics_) sum += m * std::polar(1.0, k * omega_ * t);
  return sum.real();
}

SystemSpec scalar_sine_system(double alpha, double a, double b, double omega) {
  CMatrix j0(1, 1), j1(1, 1);
  j0(0, 0) = a;
  j1(0, 0) = cdouble(0.0, -b / 2.0);
  return SystemSpec::from_nonnegative(alpha, omega, {{0, j0}, {1, j1}});
}

SystemSpec mathieu_system(double alpha, double c, double d) {
  CMatrix j0 = CMatrix::Zero(2, 2);
  j0(0, 1) = 1.0;
  j0(1, 0) = c;
  CMatrix j1 = CMatrix::Zero(2, 2);
  j1(1, 0) = cdouble(0.0, -d / 2.0);
  return SystemSpec::from_nonnegative(alpha, 1.0, {{0, j0}, {1, j1}});
}

SystemSpec parse_system(const json& doc) {
  using namespace detail;
  const double alpha = number(doc, "alpha");
  const double omega = number(doc, "omega");
  const int dim = integer(doc, "dim");
  if (dim <= 0) fail(ErrorKind::Schema, "dim must be positive");
  const json& list = member(doc, "harmonics");
  if (!list.is_array() || list.empty()) fail(ErrorKind::Schema, "harmonics must be a non-empty array");

  std::map<int, CMatrix> positive;
  std::map<int, CMatrix> negative;
  for (const json& entry : list) {
    const int k = integer(entry, "k");
    const RMatrix re = matrix_of(member(entry, "re"), "re");
    const RMatrix im = entry.contains("im") ? matrix_of(entry["im"], "im") : RMatrix::Zero(re.rows(), re.cols());
    if (re.rows() != dim || re.cols() != dim || im.rows() != dim || im.cols() != dim)
      fail(ErrorKind::DimensionMismatch, "harmonic " + std::to_string(k) + " is not dim x dim");
    CMatrix m(dim, dim);
    m.real() = re;
    m.imag() = im;
    auto& target = k >= 0 ? positive : negative;
    if (!target.emplace(k, m).second) fail(ErrorKind::Schema, "duplicate harmonic k=" + std::to_string(k));
  }
  if (!positive.count(0)) fail(ErrorKind::Schema, "harmonic k=0 is mandatory");
  for (const auto& [k, m] : negative) {
    auto it = positive.find(-k);
    const CMatrix expected = it == positive.end() ? CMatrix::Zero(dim, dim) : CMatrix(it->second.conjugate());
    const double scale = std::max(1.0, expected.cwiseAbs().maxCoeff());
    if ((m - expected).cwiseAbs().maxCoeff() > 1e-12 * scale)
      fail(ErrorKind::Symmetry, "harmonic k=" + std::to_string(k) + " is not the conjugate of k=" + std::to_string(-k));
  }
  return SystemSpec::from_nonnegative(alpha, omega, positive);
}

SystemSpec load_system(const std::filesystem::path& path) {
  return parse_system(detail::read_json_file(path));
}

json system_to_json(const SystemSpec& spec) {
  json doc;
  doc["alpha"] = spec.alpha();
  doc["omega"] = spec.omega();
  doc["dim"] = spec.dim();
  json list = json::array();
  for (const auto& [k, m] : spec.harmonics()) {
    if (k < 0) continue;
    list.push_back({{"k", k}, {"re", detail::matrix_to_json(m.real())}, {"im", detail::matrix_to_json(m.imag())}});
  }
  doc["harmonics"] = list;
  return doc;
}

}  // namespace frachill
