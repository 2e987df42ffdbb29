#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hawking/ambient.hpp"
#include "hawking/errors.hpp"
#include "hawking/random.hpp"

using namespace hawking;
using std::numbers::pi;

namespace {

Ambient model(double a) { return Ambient::warped(Profile::integrate(ProfileParams::from_a(a))); }

// The same metric supplied as generic axisymmetric components.
Ambient model_as_axisym(double a) {
  const auto p = std::make_shared<Profile>(Profile::integrate(ProfileParams::from_a(a)));
  return Ambient::axisym([p](double s, double) { return p->at(s).u; },
                         [p](double s, double th) { return p->at(s).u * std::sin(th); }, -2.9, 2.9);
}

}  // namespace

TEST_CASE("metric components") {
  const Vec3 g = model(1.0).metric_at(0.4, pi / 2);
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(g[1] == doctest::Approx(1.0));
  CHECK(g[2] == doctest::Approx(1.0));
  const Vec3 h = model(0.6).metric_at(0.0, pi / 4);
  CHECK(h[0] == doctest::Approx(1.0));
  CHECK(h[1] == doctest::Approx(0.36).epsilon(1e-14));
  CHECK(h[2] == doctest::Approx(0.18).epsilon(1e-14));
  CHECK_THROWS_AS(model(0.6).metric_at(3.5, 0.3), DomainError);
  CHECK_THROWS_AS(model(0.6).metric_at(0.0, 1.7), DomainError);
}

TEST_CASE("closed-form curvature of the model") {
  const double a = 0.6;
  const auto c = model(a).curvature_at(0.0, 0.8);
  CHECK(c.ric_nn == doctest::Approx(-(1 - a * a) / (a * a)).epsilon(1e-12));
  CHECK(c.scal == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(c.ric_tangent_normal[0]) < 1e-14);
  const auto cyl = model(1.0).curvature_at(1.3, 0.2);
  CHECK(std::abs(cyl.ric_nn) < 1e-14);
  CHECK(cyl.scal == doctest::Approx(2.0));
}

TEST_CASE("generic curvature chain reproduces the closed forms") {
  const auto exact = model(0.6);
  const auto fd = model_as_axisym(0.6);
  for (double s : {-1.2, 0.0, 0.7}) {
    for (double th : {0.3, 1.0, pi / 2}) {
      const auto ce = exact.curvature_at(s, th);
      const auto cf = fd.curvature_at(s, th);
      CHECK(cf.ric_nn == doctest::Approx(ce.ric_nn).epsilon(1e-7));
      CHECK(cf.scal == doctest::Approx(ce.scal).epsilon(1e-7));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(cf.mixed[i][j] - ce.mixed[i][j]) < 1e-7);
      CHECK(fd.point_curvature(s, th).scalar == doctest::Approx(2.0).epsilon(1e-7));
    }
  }
}

TEST_CASE("Riemann tensor symmetries at random points") {
  CounterRng rng(7);
  const auto amb = bump_ambient(Profile::integrate(ProfileParams::from_a(0.6)), {5e-2, 0.5, 0.1, 1.0});
  for (int k = 0; k < 10; ++k) {
    const auto pc = amb.point_curvature(rng.uniform(-1, 1), rng.uniform(0.2, pi / 2));
    const auto& r = pc.riemann;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          for (int d = 0; d < 3; ++d) {
            CHECK(r[a][b][c][d] == doctest::Approx(-r[b][a][c][d]).scale(1.0).epsilon(1e-9));
            CHECK(r[a][b][c][d] == doctest::Approx(-r[a][b][d][c]).scale(1.0).epsilon(1e-9));
            CHECK(r[a][b][c][d] == doctest::Approx(r[c][d][a][b]).scale(1.0).epsilon(1e-9));
          }
  }
}

TEST_CASE("boundary cylinder is totally geodesic") {
  for (const auto& amb : {model(0.6), model_as_axisym(0.6)}) {
    CHECK(std::abs(amb.boundary_mean_curvature(0.3)) < 1e-10);
    CHECK(std::abs(amb.boundary_second_form(0.3, {1, 0, 0}, {1, 0, 0})) < 1e-10);
  }
}

TEST_CASE("infimum of scalar curvature") {
  const Region region{-1.0, 1.0, 0.05, pi / 2, 41, 21};
  CHECK(inf_scalar_curvature(model(0.6), region) == doctest::Approx(2.0).epsilon(1e-10));
  const auto profile = Profile::integrate(ProfileParams::from_a(0.6));
  const auto shrink = bump_ambient(profile, {-5e-2, 0.5, 0.0, 1.0});
  double brute = 1e300;
  for (int i = 0; i < region.n_s; ++i)
    for (int j = 0; j < region.n_theta; ++j) {
      const double s = region.s_min + (region.s_max - region.s_min) * i / (region.n_s - 1);
      const double th = region.theta_min + (region.theta_max - region.theta_min) * j / (region.n_theta - 1);
      brute = std::min(brute, shrink.point_curvature(s, th).scalar);
    }
  const double inf = inf_scalar_curvature(shrink, region);
  CHECK(inf < 2.0);
  CHECK(inf == doctest::Approx(brute).epsilon(1e-12));
  // The rescaled model with a positive bump stays above the threshold used in the foliation tests.
  CHECK(inf_scalar_curvature(bump_ambient(profile, {1e-2, 0.5, 0.1, std::sqrt(0.8)}), region) >= 2.0);
}

TEST_CASE("table round trip") {
  const auto amb = model(0.6);
  std::stringstream table;
  write_ambient_table(amb, -2.0, 2.0, 161, 81, table);
  const auto back = Ambient::from_table(table);
  CHECK(back.kind() == Ambient::Kind::AxisymPerturbed);
  for (double s : {-0.55, 0.0, 1.37}) {
    const double th = 0.77;
    CHECK(back.metric_at(s, th)[1] == doctest::Approx(amb.metric_at(s, th)[1]).epsilon(1e-7));
    CHECK(back.curvature_at(s, th).ric_nn == doctest::Approx(amb.curvature_at(s, th).ric_nn).epsilon(1e-6));
  }
}
