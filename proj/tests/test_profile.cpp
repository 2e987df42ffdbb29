#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hawking/errors.hpp"
#include "hawking/profile.hpp"

using namespace hawking;

namespace {

// Independent bisection on f_m(r) = 1 - r^2/3 - 2m/r over [lo, hi].
double bisect_horizon(double m, double lo, double hi) {
  auto f = [m](double r) { return 1.0 - r * r / 3.0 - 2.0 * m / r; };
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if ((f(lo) < 0) == (f(mid) < 0)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("mass parameter from the neck radius") {
  CHECK(mass_from_a(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(mass_from_a(0.6) == doctest::Approx(0.264).epsilon(1e-14));
  CHECK(mass_from_a(0.3) == doctest::Approx(0.1455).epsilon(1e-14));
  CHECK(mass_from_a(1e-8) < 1e-8);
  CHECK(ProfileParams::from_m(0.264).a == doctest::Approx(0.6).epsilon(1e-12));
  CHECK_THROWS_AS(ProfileParams::from_a(0.0), DomainError);
  CHECK_THROWS_AS(ProfileParams::from_m(0.5), DomainError);
}

TEST_CASE("horizon roots agree with bisection") {
  const auto r = horizon_roots(0.264);
  CHECK(r.r_minus == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(r.r_minus == doctest::Approx(bisect_horizon(0.264, 0.1, 1.0)).epsilon(1e-10));
  CHECK(r.r_plus == doctest::Approx(bisect_horizon(0.264, 1.0, std::sqrt(3.0))).epsilon(1e-10));
  const auto d = horizon_roots(1.0 / 3.0);
  CHECK(d.double_root);
  CHECK(d.r_minus == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(horizon_roots(1e-9).r_plus == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
  CHECK(horizon_function(1.0 / 3.0, 1.0) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("profile initial data, symmetry and conservation") {
  for (double a : {0.3, 0.6, 0.9}) {
    const auto p = Profile::integrate(ProfileParams::from_a(a));
    CHECK(p.at(0.0).u == doctest::Approx(a).epsilon(1e-15));
    CHECK(std::abs(p.at(0.0).up) < 1e-15);
    CHECK(p.first_integral_drift() <= 1e-10);
    for (double s : {0.5, 1.7, 2.9}) {
      CHECK(p.at(s).u == doctest::Approx(p.at(-s).u).epsilon(1e-13));
      CHECK(p.at(s).up == doctest::Approx(-p.at(-s).up).epsilon(1e-12));
      CHECK(std::abs(scalar_curvature_of_profile(p, s) - 2.0) <= 1e-8);
    }
  }
}

TEST_CASE("cylinder is a fixed point") {
  const auto p = Profile::integrate(ProfileParams::from_a(1.0));
  for (double s : {-3.0, -1.0, 0.7, 3.0}) {
    CHECK(p.at(s).u == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(p.at(s).up) < 1e-14);
  }
}

TEST_CASE("profile oscillates between the horizons") {
  // The first turning point lies beyond |s| = 3, so integrate further.
  const auto p = Profile::integrate(ProfileParams::from_a(0.6), 8.0, 1e-3);
  CHECK(std::abs(p.max_u() - horizon_roots(0.264).r_plus) <= 1e-8);
}

TEST_CASE("scalar curvature formula on synthetic data") {
  CHECK(warped_scalar_curvature(1.0, 0.0, 0.0) == doctest::Approx(2.0));
  // u(s) = s is the flat cone chart.
  CHECK(std::abs(warped_scalar_curvature(0.7, 1.0, 0.0)) < 1e-15);
  CHECK(profile_rhs(1.0, 0.0) == 0.0);
}

TEST_CASE("fourth-order convergence under step halving") {
  const auto params = ProfileParams::from_a(0.6);
  const auto p1 = Profile::integrate(params, 3.0, 0.1);
  const auto p2 = Profile::integrate(params, 3.0, 0.05);
  const auto p3 = Profile::integrate(params, 3.0, 0.025);
  const double e1 = std::abs(p1.at(3.0).u - p2.at(3.0).u);
  const double e2 = std::abs(p2.at(3.0).u - p3.at(3.0).u);
  CHECK(std::log2(e1 / e2) == doctest::Approx(4.0).epsilon(0.08));
}

TEST_CASE("csv export") {
  std::ostringstream os;
  write_profile_csv(Profile::integrate(ProfileParams::from_a(0.6), 1.0, 0.5), os);
  CHECK(os.str().rfind("s,u,up", 0) == 0);
  CHECK(os.str().find("\n0,0.59999999999999998,0\n") != std::string::npos);
}
