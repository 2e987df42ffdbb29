#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "hawking/grid.hpp"
#include "hawking/random.hpp"

using namespace hawking;
using std::numbers::pi;

TEST_CASE("staggered nodes end on the equator") {
  const HemisphereGrid g(33, 16);
  CHECK(g.theta(g.equator()) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(g.theta(0) == doctest::Approx(g.h() / 2));
  CHECK(g.size() == 33u * 16u);
}

TEST_CASE("quadrature integrates polynomials in cos theta") {
  const HemisphereGrid g(33);
  // Integrals over the unit hemisphere: 1 -> 2 pi, cos^2 -> 2 pi / 3, cos^4 -> 2 pi / 5.
  for (int p : {0, 2, 4}) {
    std::vector<double> f(g.size());
    for (int i = 0; i < g.n_theta(); ++i) f[i] = std::pow(std::cos(g.theta(i)), p) * std::sin(g.theta(i));
    CHECK(g.integrate(f) == doctest::Approx(2 * pi / (p + 1)).epsilon(1e-12));
  }
  const HemisphereGrid g2(17, 8);
  std::vector<double> one(g2.size(), 1.0);
  CHECK(g2.boundary_integrate(one) == doctest::Approx(2 * pi));
}

TEST_CASE("derivatives respect reflection parity") {
  const HemisphereGrid g(65);
  std::vector<double> f(g.size());
  for (int i = 0; i < g.n_theta(); ++i) f[i] = std::cos(2 * g.theta(i));
  const auto d = field_derivatives(g, f);
  for (int i = 0; i < g.n_theta(); ++i) {
    CHECK(d.t[i] == doctest::Approx(-2 * std::sin(2 * g.theta(i))).scale(1.0).epsilon(2e-3));
    CHECK(d.tt[i] == doctest::Approx(-4 * std::cos(2 * g.theta(i))).scale(1.0).epsilon(2e-3));
  }
  CHECK(std::abs(d.t[g.equator()]) < 1e-12);
}

TEST_CASE("sixth-order interpolation") {
  const HemisphereGrid g(65);
  std::vector<double> f(g.size());
  for (int i = 0; i < g.n_theta(); ++i) f[i] = std::cos(2 * g.theta(i));
  for (double th : {0.0, 0.013, 0.9, pi / 2 - 0.004}) {
    CHECK(interpolate_theta(g, f, th) == doctest::Approx(std::cos(2 * th)).epsilon(1e-9));
  }
}

TEST_CASE("counter-based generator is reproducible and order independent") {
  CounterRng a(42, 3), b(42, 3), c(43, 3), d(42, 4);
  std::vector<double> seq;
  for (int k = 0; k < 5; ++k) seq.push_back(a.uniform());
  for (int k = 4; k >= 0; --k) CHECK(b.uniform(k) == seq[k]);
  CHECK(c.uniform(0) != seq[0]);
  CHECK(d.uniform(0) != seq[0]);
  std::set<std::uint64_t> bits;
  for (std::uint64_t k = 0; k < 1000; ++k) bits.insert(a.bits(k));
  CHECK(bits.size() == 1000);
  double mean = 0.0;
  CounterRng e(1);
  for (int k = 0; k < 20000; ++k) mean += e.uniform() / 20000;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("random admissible fields are Neumann and normalized") {
  // Same coefficients on two resolutions: the one-sided equator slope of an
  // even field vanishes at the stencil's fourth order.
  for (int n_phi : {1, 16}) {
    double slope[2] = {0.0, 0.0};
    int level = 0;
    for (int n : {33, 65}) {
      CounterRng rng(5);
      const HemisphereGrid g(n, n_phi);
      const auto f = random_admissible_field(g, rng);
      double mx = 0.0;
      for (double x : f) mx = std::max(mx, std::abs(x));
      CHECK(mx == doctest::Approx(1.0));
      for (double x : equator_theta_derivative(g, f)) slope[level] = std::max(slope[level], std::abs(x));
      ++level;
    }
    CHECK(slope[0] < 1e-3);
    CHECK(slope[0] / slope[1] > 12.0);
  }
  CounterRng rng(5);
  const HemisphereGrid g(17);
  const auto pos = random_positive_field(g, rng);
  for (double x : pos) CHECK(x > 0.0);
  std::vector<double> w(g.size(), 1.0);
  const auto z = remove_mean(pos, w);
  double sum = 0.0;
  for (double x : z) sum += x;
  CHECK(std::abs(sum) < 1e-13);
}
