#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hawking/errors.hpp"
#include "hawking/mass.hpp"
#include "hawking/random.hpp"
#include "hawking/variation.hpp"

using namespace hawking;
using std::numbers::pi;

namespace {

Ambient model(double a) { return Ambient::warped(Profile::integrate(ProfileParams::from_a(a))); }

// Everything a formula evaluation needs, owned in one place.
struct Setup {
  GraphSurface surface;
  SurfaceGeometry geo;
  JacobiOperator op;
  explicit Setup(GraphSurface s) : surface(std::move(s)), geo(compute_geometry(surface)), op(assemble_jacobi(surface, geo)) {}
  VariationContext ctx() const { return {surface, geo, op, 2.0}; }
};

GraphSurface graph(const Ambient& amb, const HemisphereGrid& g, double s0, double eps, const std::vector<double>& psi) {
  std::vector<double> w(psi.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = s0 + eps * psi[k];
  return GraphSurface(amb, g, std::move(w));
}

}  // namespace

TEST_CASE("first variation of area") {
  const auto amb = model(0.6);
  CounterRng rng(1);
  const HemisphereGrid g(33, 16);
  const Setup minimal(slice_surface(amb, 0.0, g));
  CHECK(std::abs(first_variation_area(minimal.ctx(), {random_admissible_field(g, rng), true})) < 1e-12);

  const Setup slice(slice_surface(amb, 0.5, g));
  const std::vector<double> one(g.size(), 1.0);
  const auto u = [&](double s) { return amb.profile()->at(s).u; };
  const double e = 1e-4;
  const double fd = (2 * pi * u(0.5 + e) * u(0.5 + e) - 2 * pi * u(0.5 - e) * u(0.5 - e)) / (2 * e);
  const double formula = first_variation_area(slice.ctx(), {one, true});
  CHECK(formula == doctest::Approx(-slice.geo.nodes[0].mean_curvature * slice.geo.area).epsilon(1e-12));
  CHECK(std::abs(formula - fd) <= 1e-6);

  const auto st = first_variation_area_study(slice_surface(amb, 0.3, g), random_admissible_field(g, rng),
                                             {1e-2, 5e-3, 2.5e-3});
  CHECK(st.relative_error < 1e-4);
  CHECK(st.observed_order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("index form of the cylinder") {
  const HemisphereGrid g(17, 8);
  const Setup cyl(slice_surface(model(1.0), 0.0, g));
  const std::vector<double> one(g.size(), 1.0);
  CHECK(std::abs(index_form(cyl.ctx(), {one, true}, {one, true})) < 1e-12);
}

TEST_CASE("slices are critical for the modified mass") {
  CounterRng rng(2);
  const HemisphereGrid g(33, 16);
  for (double a : {0.3, 0.6, 0.9}) {
    for (double s0 : {-0.8, 0.0, 0.5}) {
      const Setup s(slice_surface(model(a), s0, g));
      CHECK(std::abs(first_variation_mass(s.ctx(), {random_admissible_field(g, rng), true})) <= 1e-8);
    }
  }
  const Setup minimal(slice_surface(model(0.6), 0.0, g));
  CHECK(std::abs(first_variation_mass(minimal.ctx(), {std::vector<double>(g.size(), 1.0), true})) < 1e-14);
}

TEST_CASE("first variation of mass on a perturbed graph") {
  const auto amb = model(0.6);
  const HemisphereGrid g(1025);
  CounterRng rng(8);
  const auto base = graph(amb, g, 0.3, 0.02, random_admissible_field(g, rng));
  const auto st = first_variation_mass_study(base, random_admissible_field(g, rng), 2.0, {4e-3, 2e-3, 1e-3});
  CHECK(st.relative_error <= 1e-4);
  CHECK(st.observed_order == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("first derivatives do not depend on the gauge") {
  const auto amb = model(0.6);
  const HemisphereGrid g(129);
  CounterRng rng(12);
  const auto base = graph(amb, g, 0.3, 0.05, random_admissible_field(g, rng));
  const auto phi = random_admissible_field(g, rng);
  const std::vector<double> steps{1e-3, 5e-4, 2.5e-4};
  const auto geodesic = first_variation_mass_study(base, phi, 2.0, steps);
  const auto vertical = first_variation_mass_study(base, phi, 2.0, steps, Gauge::Vertical);
  CHECK(std::abs(geodesic.best_fd - vertical.best_fd) <= 1e-10);
  // On slices the two flows coincide.
  const auto slice = slice_surface(amb, 0.4, g);
  const auto geo = compute_geometry(slice);
  const auto a = normal_geodesic_variation(slice, geo, phi, 0.01);
  const auto b = vertical_variation(slice, geo, phi, 0.01);
  for (std::size_t k = 0; k < a.w.size(); ++k) {
    CHECK(a.w[k] == doctest::Approx(0.4 + 0.01 * phi[k]).epsilon(1e-14));
    CHECK(a.w[k] == doctest::Approx(b.w[k]).epsilon(1e-14));
  }
}

TEST_CASE("geodesics along the s-lines") {
  const auto amb = model(0.6);
  const auto end = geodesic_endpoint(amb, 0.2, 0.9, 0.3, 0.0);
  CHECK(end[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(end[1] == doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("variation of the Jacobi operator") {
  const auto amb = model(0.6);
  CounterRng rng(5);
  const HemisphereGrid g(129);
  const auto phi = random_admissible_field(g, rng), psi = random_admissible_field(g, rng);
  const Setup minimal(slice_surface(amb, 0.0, g));
  for (double v : jacobi_derivative(minimal.ctx(), {phi, true}, {psi, true})) CHECK(std::abs(v) < 1e-10);

  const Setup slice(slice_surface(amb, 0.4, g));
  const auto full = jacobi_derivative(slice.ctx(), {phi, true}, {psi, true});
  const auto closed = jacobi_derivative_slice_form(slice.ctx(), {phi, true}, {psi, true});
  double scale = 0.0, gap_closed = 0.0;
  for (std::size_t k = 0; k < full.size(); ++k) {
    scale = std::max(scale, std::abs(full[k]));
    gap_closed = std::max(gap_closed, std::abs(full[k] - closed[k]));
  }
  CHECK(gap_closed <= 1e-10 * scale);

  // O(eps) + O(h^2): halving eps shrinks the gap until the grid floor.
  double gaps[2];
  int level = 0;
  for (double eps : {2e-2, 1e-3}) {
    const auto fd = jacobi_derivative_fd(slice.surface, phi, psi, eps);
    double gap = 0.0;
    for (std::size_t k = 0; k < full.size(); ++k) gap = std::max(gap, std::abs(full[k] - fd[k]));
    gaps[level++] = gap / scale;
  }
  CHECK(gaps[1] < 1e-3);
  CHECK(gaps[1] < gaps[0]);
}

TEST_CASE("second variation of mass at the minimal slice") {
  const auto amb = model(0.6);
  const HemisphereGrid g(65, 128);
  const std::vector<double> steps{1e-2, 5e-3, 2.5e-3};
  const std::vector<double> one(g.size(), 1.0);
  const Setup minimal(slice_surface(amb, 0.0, g));

  // phi = 1 flows through slices, which all carry the same mass.
  const auto flat = second_variation_mass_study(minimal.surface, one, 2.0, steps);
  CHECK(std::abs(flat.formula) < 1e-10);
  CHECK(std::abs(flat.fd.back()) < 1e-8);

  std::vector<double> mode(g.size());
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 0; j < g.n_phi(); ++j) mode[g.index(i, j)] = 1.5 * std::pow(std::cos(g.theta(i)), 2) - 0.5;
  const auto st = second_variation_mass_study(minimal.surface, mode, 2.0, steps);
  CHECK(st.formula < 0.0);
  CHECK(st.relative_error < 1e-3);
  CHECK(st.observed_order == doctest::Approx(2.0).epsilon(0.05));

  CounterRng rng(6);
  const auto terms = second_variation_mass(minimal.ctx(), {random_admissible_field(g, rng), true});
  const double sum = terms.flux_term + terms.operator_term + terms.lambda_term + terms.mean_term + terms.area_term +
                     terms.boundary_lambda_term + terms.boundary_area_term;
  CHECK(terms.total == doctest::Approx(sum).epsilon(1e-14));

  const Setup cyl(slice_surface(model(1.0), 0.0, HemisphereGrid(17, 8)));
  CHECK(std::abs(second_variation_mass(cyl.ctx(), {std::vector<double>(17 * 8, 1.0), true}).total) < 1e-12);
}

TEST_CASE("second variation needs a critical surface") {
  const auto amb = model(0.6);
  const HemisphereGrid g(33);
  CounterRng rng(3);
  const Setup s(graph(amb, g, 0.3, 0.1, random_admissible_field(g, rng)));
  CHECK_THROWS_AS(second_variation_mass(s.ctx(), {random_admissible_field(g, rng), true}), PreconditionError);
}

TEST_CASE("acceleration term vanishes in the normal-geodesic gauge") {
  const HemisphereGrid g(33, 16);
  CounterRng rng(4);
  const Setup s(slice_surface(model(0.6), 0.2, g));
  const auto phi = random_admissible_field(g, rng);
  const auto t = variation_terms(s.surface, s.geo, phi, phi, 2.0);
  for (double v : t.accel_divergence) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("Richardson study on synthetic data") {
  FdStudy st;
  st.formula = 1.0;
  st.steps = {0.1, 0.05, 0.025};
  for (double e : st.steps) st.fd.push_back(1.0 + 3.0 * e * e);
  richardson(st, 1e-12);
  CHECK(st.observed_order == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(st.best_fd == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(st.relative_error == doctest::Approx(3.0 * 0.025 * 0.025).epsilon(1e-9));
  st.fd = {1.0, 1.0, 1.0};
  richardson(st, 1e-12);
  CHECK(std::isnan(st.observed_order));
}
