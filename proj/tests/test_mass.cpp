#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hawking/errors.hpp"
#include "hawking/mass.hpp"
#include "hawking/random.hpp"

using namespace hawking;
using std::numbers::pi;

namespace {

Ambient model(double a) { return Ambient::warped(Profile::integrate(ProfileParams::from_a(a))); }

}  // namespace

TEST_CASE("mass functionals on closed-form inputs") {
  CHECK(modified_hawking_mass(2 * pi, 0.0, 1, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(modified_hawking_mass(0.0, 1.0, 1, 2.0) == 0.0);
  CHECK(hawking_mass(4 * pi, 0.0, 2, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // Doubling: twice the area and the H^2 integral with chi = 2 gives the same value.
  CHECK(hawking_mass(2 * 3.1, 2 * 0.7, 2, 2.0) == doctest::Approx(modified_hawking_mass(3.1, 0.7, 1, 2.0)).epsilon(1e-15));
}

TEST_CASE("slice masses equal the mass parameter") {
  const HemisphereGrid g(33);
  const std::vector<double> s{-1.0, 0.0, 0.5, 1.0};
  for (double a : {0.3, 0.6, 1.0}) {
    const auto amb = model(a);
    for (std::size_t k = 0; k < s.size(); ++k) {
      const auto st = amb.profile()->at(s[k]);
      const double closed = 0.5 * st.u * (1 - st.up * st.up - st.u * st.u / 3);
      const double m = slice_mass_sweep(amb, s, g)[k];
      CHECK(std::abs(m - mass_from_a(a)) <= 1e-8);
      CHECK(std::abs(m - closed) <= 1e-12);
    }
  }
  CHECK(slice_mass_sweep(model(0.6), s, g)[2] == doctest::Approx(0.264).epsilon(1e-8));
  CHECK(mass_from_a(0.3) == doctest::Approx(0.1455));
}

TEST_CASE("doubled Hawking mass matches the half surface") {
  const HemisphereGrid g(33, 16);
  CounterRng rng(9);
  for (int k = 0; k < 10; ++k) {
    auto w = random_admissible_field(g, rng);
    const double s0 = rng.uniform(-1, 1);
    for (double& x : w) x = s0 + 0.05 * x;
    const auto geo = compute_geometry(GraphSurface(model(0.6), g, w));
    const auto rep = mass_report(geo, 2.0);
    CHECK(std::abs(rep.m_hawking_double - rep.m_tilde) <= 1e-12);
    CHECK(std::abs(hawking_mass_of_double(geo, 2.0) - modified_hawking_mass(geo, 2.0)) <= 1e-12);
  }
  const auto cyl = compute_geometry(slice_surface(model(1.0), 0.2, g));
  CHECK(hawking_mass_of_double(cyl, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("graphs near slices have smaller mass") {
  const HemisphereGrid g(65);
  CounterRng rng(21);
  const auto amb = model(0.6);
  for (int k = 0; k < 10; ++k) {
    auto w = random_admissible_field(g, rng);
    for (double& x : w) x = 0.4 + 0.02 * x;
    CHECK(modified_hawking_mass(compute_geometry(GraphSurface(amb, g, w)), 2.0) < 0.264);
  }
}

TEST_CASE("slice sweep needs the model") {
  const auto bump = bump_ambient(Profile::integrate(ProfileParams::from_a(0.6)), {1e-2, 0.5, 0.0, 1.0});
  const std::vector<double> s{0.0};
  CHECK_THROWS_AS(slice_mass_sweep(bump, s, HemisphereGrid(9)), PreconditionError);
}
