#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hawking/cmc.hpp"
#include "hawking/errors.hpp"
#include "hawking/mass.hpp"
#include "hawking/spectral.hpp"

using namespace hawking;

namespace {

Profile profile(double a) { return Profile::integrate(ProfileParams::from_a(a)); }

Ambient model(double a) { return Ambient::warped(profile(a)); }

Ambient bumped(double amplitude) { return bump_ambient(profile(0.6), {amplitude, 0.5, 0.1, std::sqrt(0.8)}); }

std::vector<double> p2_bump(const HemisphereGrid& g, double s0, double eps) {
  std::vector<double> w(g.size());
  for (int i = 0; i < g.n_theta(); ++i) w[i] = s0 + eps * (std::pow(std::cos(g.theta(i)), 2) - 1.0 / 3.0);
  return w;
}

}  // namespace

TEST_CASE("slices solve the leaf equations at once") {
  const HemisphereGrid g(65);
  const auto base = make_base(model(0.6), g, std::vector<double>(g.size(), 0.0));
  for (double t : {-0.2, 0.15}) {
    const auto sol = solve_cmc_leaf(base, t, std::vector<double>(g.size(), t));
    CHECK(sol.report.converged);
    CHECK(sol.report.iterations <= 1);
    CHECK(sol.report.residuals.front() <= 1e-12);
    for (double w : sol.state.w) CHECK(w == doctest::Approx(t).epsilon(1e-12));
  }
}

TEST_CASE("Newton converges quadratically back to the slice") {
  const HemisphereGrid g(65);
  const auto base = make_base(model(0.6), g, std::vector<double>(g.size(), 0.0));
  const auto sol = solve_cmc_leaf(base, 0.1, p2_bump(g, 0.1, 1e-2));
  CHECK(sol.report.converged);
  const auto& r = sol.report.residuals;
  REQUIRE(r.size() >= 3);
  CHECK(r[1] <= 1e2 * r[0] * r[0]);
  CHECK(r[2] <= 1e2 * r[1] * r[1] + 1e-13);
  CHECK(sol.report.quadratic_constant < 1e2);
  for (double w : sol.state.w) CHECK(w == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("perturbed ambient: non-slice leaf of constant mean curvature") {
  const HemisphereGrid g(65);
  const auto amb = bumped(1e-2);
  const auto base = make_base(amb, g, solve_minimal_leaf(amb, g, std::vector<double>(g.size(), 0.0)).state.w);
  const auto sol = solve_cmc_leaf(base, 0.1, base.w0);
  CHECK(sol.report.converged);
  const auto h = compute_geometry(GraphSurface(amb, g, sol.state.w)).mean_curvature();
  double spread = 0.0;
  for (double x : h) spread = std::max(spread, std::abs(x - sol.state.mean_curvature));
  CHECK(spread <= 1e-10);
  const auto [lo, hi] = std::minmax_element(sol.state.w.begin(), sol.state.w.end());
  CHECK(*hi - *lo > 1e-6);
}

TEST_CASE("model foliation") {
  const double a = 0.6;
  const HemisphereGrid g(129);
  auto fol = foliate(model(a), g, 0.0, -0.3, 0.3, 1e-2);
  REQUIRE_FALSE(fol.halted);
  CHECK(fol.leaves.size() == 61);
  const auto lapse = lapse_of_foliation(fol);
  const auto mono = monotonicity_audit(fol);
  const auto k0 = base_leaf_index(fol);
  const double lambda1 = lowest_eigenpair(assemble_jacobi(slice_surface(model(a), 0.0, g),
                                                          compute_geometry(slice_surface(model(a), 0.0, g)))).lambda1;
  CHECK(fol.leaves[k0].h_prime == doctest::Approx(-lambda1).epsilon(1e-3));
  CHECK(fol.leaves[k0].h_prime == doctest::Approx(-1.7778).epsilon(1e-3));
  for (std::size_t k = 0; k < fol.leaves.size(); ++k) {
    const auto& lf = fol.leaves[k];
    for (double m : lf.mu) CHECK(std::abs(m - lf.t) <= 1e-10);
    for (double r : lf.rho) CHECK(std::abs(r - 1.0) <= 1e-6);
    CHECK(std::abs(lf.mass - mass_from_a(a)) <= 1e-7);
    if (k + 1 < fol.leaves.size()) CHECK(fol.leaves[k + 1].mean_curvature < lf.mean_curvature);
    if (lf.t < -1e-9) CHECK(lf.mean_curvature > 0.0);
    if (lf.t > 1e-9) CHECK(lf.mean_curvature < 0.0);
    CHECK(std::abs(mono.rows[k].theta) < 1e-12);
    CHECK(std::abs(lemma33_audit(lf, fol.base.ambient, g).residual) < 1e-10);
  }
  CHECK(lapse.max_route_gap < 1e-10);
  CHECK(mono.max_fd_gap < 1e-10);
  CHECK(mono.sign_pattern);

  const auto rig = rigidity_reconstruct(fol);
  CHECK(rig.a == doctest::Approx(a).epsilon(1e-10));
  CHECK(rig.max_deviation <= 1e-6);
  CHECK(rig.max_ode_residual <= 1e-4);

  std::ostringstream os;
  write_foliation_csv(fol, mono, os);
  CHECK(os.str().find('\n') != std::string::npos);
}

TEST_CASE("perturbed foliation: lapse, two-sided lemma and monotonicity") {
  const HemisphereGrid g(65);
  auto fol = foliate(bumped(1e-2), g, 0.0, -0.1, 0.1, 1e-2);
  REQUIRE_FALSE(fol.halted);
  const auto lapse = lapse_of_foliation(fol);
  const auto mono = monotonicity_audit(fol);
  CHECK(lapse.max_route_gap <= 1e-6);
  CHECK(lapse.max_jacobi_residual <= 5e-6);
  CHECK(mono.hypotheses_hold);
  CHECK(mono.sign_pattern);
  CHECK(mono.max_fd_gap <= 1e-5);
  for (std::size_t k = 0; k < fol.leaves.size(); ++k) {
    CHECK(lapse.max_rho[k] - lapse.min_rho[k] > 1e-6);
    CHECK(mono.rows[k].theta < 0.0);
    const auto l33 = lemma33_audit(fol.leaves[k], fol.base.ambient, g);
    CHECK(l33.theta == doctest::Approx(mono.rows[k].theta).epsilon(1e-12));
    if (!std::isnan(lapse.jacobi_residual[k])) CHECK(std::abs(l33.residual) <= 5e-6);
  }
}

TEST_CASE("a curvature dip below the threshold switches off the sign hypotheses") {
  const HemisphereGrid g(33);
  const auto amb = bump_ambient(profile(0.6), {-5e-2, 0.5, 0.0, 1.0});
  auto fol = foliate(amb, g, 0.0, -0.05, 0.05, 1e-2);
  lapse_of_foliation(fol);
  CHECK_FALSE(monotonicity_audit(fol).hypotheses_hold);
}

TEST_CASE("lapse needs enough leaves") {
  const HemisphereGrid g(17);
  auto fol = foliate(model(0.6), g, 0.0, -0.01, 0.01, 1e-2);
  CHECK_THROWS_AS(lapse_of_foliation(fol), PreconditionError);
}
