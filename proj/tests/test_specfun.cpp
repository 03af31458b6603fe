#include <doctest.h>

#include <cmath>
#include <numbers>

#include "frachill/error.hpp"
#include "frachill/specfun.hpp"

using namespace frachill;
using specfun::MLParams;
using specfun::MLRegime;

namespace {

struct MlRef {
  double alpha, beta;
  cdouble z, value;
};

// Arbitrary-precision power series (mpmath, 40+ digits), frozen.
const MlRef kReference[] = {
    {0.1, 1.0, {-0.3, 9.69326744659552e-16}, {0.759612531778489, 5.916471222816735e-16}},
    {0.3, 1.0, {-1.7137775067378946, 1.0310027436429283}, {0.27573064569821987, 0.11722597374816587}},
    {0.3, 0.3, {-0.12484405096414272, 0.2727892280477045}, {0.22068374913624642, 0.1186309384087455}},
    {0.3, 0.3, {0.004379796909032949, 5.499998256125091}, {-0.007525306128954771, 0.0016527475128478857}},
    {0.5, 1.0, {1.775552996935701, 4.566991521239409}, {-0.044023424553213335, 0.10831907467041313}},
    {0.5, 1.0, {10.443232486495436, 5.7051639093900155}, {3.305845611648203e+33, -7.386080274692594e+32}},
    {0.5, 0.5, {0.3, 0.0}, {1.0003143534005858, 0.0}},
    {0.5, 0.5, {-4.9, 1.583233682943935e-14}, {0.011082039804938385, 6.768483064230709e-17}},
    {0.5, 0.5, {-10.196976165090474, 6.134466324675424}, {0.0009447810395556599, 0.0017423899390454905}},
    {0.7, 1.0, {-0.12484405096414272, 0.2727892280477045}, {0.8266334979943388, 0.2435348846930533}},
    {0.7, 1.0, {0.004379796909032949, 5.499998256125091}, {-0.010228419579098922, 0.06048070286810873}},
    {0.7, 1.0, {4.529471930958421, 11.650488574590328}, {-0.00812306628485098, 0.016980009182703048}},
    {0.7, 0.7, {0.2632747685671118, 0.1438276615812609}, {1.1134124265462308, 0.25294266341360533}},
    {0.7, 0.7, {5.5, 0.0}, {270261.8780953638, 0.0}},
    {0.7, 0.7, {-11.9, 3.8449960871495565e-14}, {0.0018811776068605435, 1.2892831073728074e-17}},
    {0.7, 0.7, {-29.991106367913154, 18.042548013751247}, {8.895599111745897e-05, 0.00017762171790952917}},
    {0.9, 1.0, {-2.0391194990809978, 4.455557391445841}, {-9.373242486680691e-05, -0.00966391370161567}},
    {0.9, 1.0, {0.009476287857725835, 11.899996226888833}, {-0.0725446826370858, 0.028683372693897813}},
    {0.9, 1.0, {12.682521406683577, 32.62136800885292}, {219713.62617897117, 51906.91665328915}},
    {0.9, 0.9, {4.300154553262827, 2.349185139160595}, {-190.38149896724613, 0.49024451977668837}},
    {0.9, 0.9, {11.9, 0.0}, {9341007.49192159, 0.0}},
    {0.9, 0.9, {-20.0, 6.462178297730347e-14}, {0.0002840259574119264, 2.022361716189077e-18}},
    {1.0, 1.0, {-1.7137775067378946, 1.0310027436429283}, {0.09260710465798078, 0.15456437964928957}},
    {1.0, 1.0, {-3.3291746923771393, 7.274379414605454}, {0.019619753058196295, 0.02997212181799139}},
    {1.0, 1.0, {0.015926534214665267, 19.999993658636694}, {0.414639308770081, 0.9275990786185029}},
    {1.0, 1.0, {0.7247155089533472, 1.8640781719344526}, {-0.5967346541690267, 1.97600539518559}},
    {1.0, 1.0, {7.020660495122982, 3.835404308833624}, {-860.7072967556023, -715.9057197941842}},
    {1.0, 1.0, {20.0, 0.0}, {485165195.4097903, 0.0}},
};

bool close(cdouble got, cdouble want, double rel) {
  return std::abs(got - want) <= rel * std::max(1.0, std::abs(want));
}

}  // namespace

TEST_CASE("gamma and its reciprocal") {
  CHECK(specfun::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
  CHECK(specfun::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-15));
  CHECK(specfun::gamma(-0.5) == doctest::Approx(-2.0 * std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK_THROWS_AS(specfun::gamma(0.0), Error);
  CHECK_THROWS_AS(specfun::gamma(-3.0), Error);
  try {
    specfun::gamma(-2.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Pole);
  }
  CHECK(specfun::rgamma(0.0) == 0.0);
  CHECK(specfun::rgamma(-4.0) == 0.0);
  CHECK(specfun::rgamma(1.5) == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-15));
}

TEST_CASE("upper incomplete gamma against erfc") {
  // Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x))
  for (double x : {0.0, 0.01, 0.5, 2.0, 7.5, 20.0}) {
    const double want = std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(x));
    CHECK(specfun::upper_incomplete_gamma(0.5, x) == doctest::Approx(want).epsilon(1e-13));
  }
  // Gamma(1, x) = e^{-x}; the scaled variant stays finite far out
  for (double x : {0.3, 29.0, 31.0, 400.0, 1e4})
    CHECK(specfun::scaled_upper_incomplete_gamma(1.0, x) == doctest::Approx(1.0).epsilon(1e-13));
  for (double x : {5.0, 30.5, 60.0}) {
    const double want = std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(x)) * std::exp(x);
    CHECK(specfun::scaled_upper_incomplete_gamma(0.5, x) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("Mittag-Leffler matches the high-precision series table") {
  for (const MlRef& r : kReference) {
    const cdouble got = specfun::mittag_leffler({r.alpha, r.beta}, r.z);
    INFO("alpha=" << r.alpha << " beta=" << r.beta << " z=" << r.z);
    CHECK(close(got, r.value, 1e-9));
  }
}

TEST_CASE("Mittag-Leffler closed forms") {
  // E_1 = exp, E_{1,2}(z) = (e^z - 1)/z
  for (cdouble z : {cdouble(0.3, 0.0), cdouble(-7.0, 2.0), cdouble(4.0, -9.0), cdouble(-40.0, 0.0)}) {
    CHECK(close(specfun::mittag_leffler({1.0, 1.0}, z), std::exp(z), 1e-12));
    CHECK(close(specfun::mittag_leffler({1.0, 2.0}, z), (std::exp(z) - 1.0) / z, 1e-9));
  }
  // E_{1/2}(-x) = e^{x^2} erfc(x), covering all three regimes
  for (double x : {0.1, 1.0, 2.2, 3.0, 4.0, 8.0, 15.0, 25.0}) {
    const double want = x < 20.0 ? std::exp(x * x) * std::erfc(x) : 1.0 / (x * std::sqrt(std::numbers::pi)) * (1.0 - 0.5 / (x * x) + 0.75 / std::pow(x, 4) - 1.875 / std::pow(x, 6));
    INFO("x=" << x);
    CHECK(specfun::mittag_leffler({0.5, 1.0}, -x).real() == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("Mittag-Leffler recurrence and conjugate symmetry") {
  // E_{a,b}(z) = 1/Gamma(b) + z E_{a,a+b}(z)
  for (double a : {0.3, 0.5, 0.8, 1.0}) {
    for (cdouble z : {cdouble(-2.0, 0.5), cdouble(0.7, 3.0), cdouble(-9.0, -4.0), cdouble(4.0, 1.0)}) {
      const cdouble lhs = specfun::mittag_leffler({a, 1.0}, z);
      const cdouble rhs = specfun::rgamma(1.0) + z * specfun::mittag_leffler({a, a + 1.0}, z);
      CHECK(close(lhs, rhs, 1e-8));
      CHECK(close(specfun::mittag_leffler({a, 1.0}, std::conj(z)), std::conj(lhs), 1e-12));
    }
  }
  // E_{0.3}(15) ~ exp(15^(10/3)) overflows a double
  CHECK_THROWS_AS(specfun::mittag_leffler({0.3, 1.0}, cdouble(15.0, 1.0)), Error);
}

TEST_CASE("E_{a,a}(-t) decreases monotonically") {
  for (double a : {0.3, 0.5, 0.7, 0.9}) {
    double prev = specfun::mittag_leffler({a, a}, 0.0).real();
    CHECK(prev == doctest::Approx(specfun::rgamma(a)));
    for (double t = 0.05; t <= 40.0; t *= 1.15) {
      const double v = specfun::mittag_leffler({a, a}, -t).real();
      CHECK(v < prev);
      CHECK(v > 0.0);
      prev = v;
    }
  }
}

TEST_CASE("forced regimes agree where they overlap") {
  const MLParams p{0.6, 1.0};
  const cdouble z(-4.0, 1.0);
  const cdouble series = specfun::mittag_leffler(p, z, MLRegime::Series);
  CHECK(close(specfun::mittag_leffler(p, z, MLRegime::Integral), series, 1e-9));
  const cdouble far(-30.0, 2.0);
  CHECK(close(specfun::mittag_leffler(p, far, MLRegime::Asymptotic),
              specfun::mittag_leffler(p, far, MLRegime::Integral), 1e-9));
  CHECK_THROWS_AS(specfun::mittag_leffler(p, cdouble(-0.5, 0.0), MLRegime::Asymptotic), Error);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(specfun::mittag_leffler({0.0, 1.0}, 1.0), Error);
  CHECK_THROWS_AS(specfun::mittag_leffler({1.5, 1.0}, 1.0), Error);
  CHECK_THROWS_AS(specfun::mittag_leffler({0.5, -1.0}, 1.0), Error);
  CHECK_THROWS_AS(specfun::mittag_leffler({0.5, 1.0}, 1e7), Error);
}

TEST_CASE("matrix Mittag-Leffler") {
  // Diagonalizable: V diag(E(s mu)) V^{-1}
  RMatrix a(2, 2);
  a << -1.0, 2.0, 0.0, -3.0;
  const RMatrix e = specfun::ml_matrix({0.5, 1.0}, a, 0.7);
  const double e1 = specfun::mittag_leffler({0.5, 1.0}, -0.7).real();
  const double e3 = specfun::mittag_leffler({0.5, 1.0}, -2.1).real();
  CHECK(e(0, 0) == doctest::Approx(e1).epsilon(1e-12));
  CHECK(e(1, 1) == doctest::Approx(e3).epsilon(1e-12));
  CHECK(e(1, 0) == doctest::Approx(0.0));
  CHECK(e(0, 1) == doctest::Approx(e1 - e3).epsilon(1e-12));  // eigenvectors (1,0), (1,-1)

  // A complex pair still yields a real matrix: rotation generator at alpha = 1
  RMatrix r(2, 2);
  r << 0.0, -1.0, 1.0, 0.0;
  const RMatrix rot = specfun::ml_matrix({1.0, 1.0}, r, 0.4);
  CHECK(rot(0, 0) == doctest::Approx(std::cos(0.4)).epsilon(1e-12));
  CHECK(rot(1, 0) == doctest::Approx(std::sin(0.4)).epsilon(1e-12));

  RMatrix jordan(2, 2);
  jordan << 1.0, 1.0, 0.0, 1.0;
  try {
    specfun::ml_matrix({0.5, 1.0}, jordan, 1.0);
    FAIL("expected a non-diagonalizable error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::NonDiagonalizable);
  }
}
