#include "hawking/variation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include "hawking/errors.hpp"
#include "hawking/mass.hpp"

namespace hawking {

namespace {

constexpr double kPi = std::numbers::pi;

double prefactor(double area) { return std::sqrt(area) / std::pow(8.0 * kPi, 1.5); }

double fv_integral(const JacobiOperator& op, const std::vector<double>& f) { return op.integrate(f); }

double boundary_sum(const JacobiOperator& op, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += op.arc_lengths[j] * f[j];
  return acc;
}

// Metric derivatives d_c gamma_ab at every node, c = 0 (theta), 1 (phi).
struct MetricDerivs {
  FieldDerivatives tt, tp, pp;
  double d(std::size_t k, int c, int a, int b) const {
    const FieldDerivatives& f = (a == 0 && b == 0) ? tt : (a == 1 && b == 1) ? pp : tp;
    return c == 0 ? f.t[k] : f.p[k];
  }
};

MetricDerivs metric_derivatives(const HemisphereGrid& grid, const SurfaceGeometry& geo) {
  std::vector<double> tt(grid.size()), tp(grid.size()), pp(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    tt[k] = geo.nodes[k].metric[0][0];
    tp[k] = geo.nodes[k].metric[0][1];
    pp[k] = geo.nodes[k].metric[1][1];
  }
  return {field_derivatives(grid, tt), field_derivatives(grid, tp, {-1.0, -1.0}), field_derivatives(grid, pp)};
}

std::vector<double> boundary_robin_defect(const HemisphereGrid& grid, const SurfaceGeometry& geo,
                                          const std::vector<double>& f, const FieldDerivatives& df) {
  const std::vector<double> ft = equator_theta_derivative(grid, f);
  std::vector<double> out(grid.n_phi());
  for (int j = 0; j < grid.n_phi(); ++j) {
    const std::size_t k = grid.index(grid.equator(), j);
    const Mat2& gi = geo.nodes[k].metric_inv;
    const double dnu = (gi[0][0] * ft[j] + gi[0][1] * df.p[k]) / std::sqrt(gi[0][0]);
    out[j] = dnu - geo.boundary[j].pi_nn * f[k];
  }
  return out;
}

}  // namespace

VariationTerms variation_terms(const GraphSurface& surface, const SurfaceGeometry& geo,
                               const std::vector<double>& phi, const std::vector<double>& psi, double lambda) {
  const HemisphereGrid& grid = surface.grid;
  const std::size_t n = grid.size();
  VariationTerms t;
  t.lambda = lambda;
  for (auto* v : {&t.mean_curvature, &t.gauss_curvature, &t.norm_a2, &t.trace_a3, &t.scal, &t.ric_nn,
                  &t.laplace_phi, &t.laplace_psi, &t.a_hess_phi, &t.a_hess_psi, &t.omega_grad_phi,
                  &t.omega_grad_psi, &t.grad_h_grad_psi, &t.grad_phi_grad_psi, &t.a_grad_phi_grad_psi,
                  &t.div_omega, &t.mixed_contraction, &t.accel_divergence}) {
    v->assign(n, 0.0);
  }

  const MetricDerivs md = metric_derivatives(grid, geo);
  const FieldDerivatives dphi = field_derivatives(grid, phi);
  const FieldDerivatives dpsi = field_derivatives(grid, psi);
  const FieldDerivatives dh = field_derivatives(grid, geo.mean_curvature());

  // Divergence of omega: (1/J) d_a (J gamma^{ab} omega_b).
  std::vector<double> vt(n), vp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const NodeGeometry& nd = geo.nodes[k];
    const Mat2& gi = nd.metric_inv;
    vt[k] = nd.area_density * (gi[0][0] * nd.omega[0] + gi[0][1] * nd.omega[1]);
    vp[k] = nd.area_density * (gi[1][0] * nd.omega[0] + gi[1][1] * nd.omega[1]);
  }
  const FieldDerivatives dvt = field_derivatives(grid, vt, {-1.0, -1.0});
  const FieldDerivatives dvp = field_derivatives(grid, vp);

  for (std::size_t k = 0; k < n; ++k) {
    const NodeGeometry& nd = geo.nodes[k];
    const Mat2& gi = nd.metric_inv;
    // Christoffel symbols of the induced metric.
    double chr[2][2][2];
    for (int c = 0; c < 2; ++c)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double acc = 0.0;
          for (int d = 0; d < 2; ++d) acc += gi[c][d] * (md.d(k, a, d, b) + md.d(k, b, d, a) - md.d(k, d, a, b));
          chr[c][a][b] = 0.5 * acc;
        }
    auto hessian = [&](const FieldDerivatives& f) {
      const double grad[2] = {f.t[k], f.p[k]};
      const double second[2][2] = {{f.tt[k], f.tp[k]}, {f.tp[k], f.pp[k]}};
      Mat2 hs{};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) hs[a][b] = second[a][b] - chr[0][a][b] * grad[0] - chr[1][a][b] * grad[1];
      return hs;
    };
    Mat2 a_up{};  // A^{ab}
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double acc = 0.0;
        for (int c = 0; c < 2; ++c)
          for (int d = 0; d < 2; ++d) acc += gi[a][c] * nd.second_form[c][d] * gi[d][b];
        a_up[a][b] = acc;
      }
    auto contract = [](const Mat2& up, const Mat2& low) {
      return up[0][0] * low[0][0] + up[0][1] * low[0][1] + up[1][0] * low[1][0] + up[1][1] * low[1][1];
    };
    auto raise = [&](double f_t, double f_p) {
      return std::array<double, 2>{gi[0][0] * f_t + gi[0][1] * f_p, gi[1][0] * f_t + gi[1][1] * f_p};
    };
    const Mat2 hphi = hessian(dphi);
    const Mat2 hpsi = hessian(dpsi);
    const auto gphi = raise(dphi.t[k], dphi.p[k]);
    const auto gpsi = raise(dpsi.t[k], dpsi.p[k]);

    t.mean_curvature[k] = nd.mean_curvature;
    t.gauss_curvature[k] = nd.gauss_curvature;
    t.norm_a2[k] = nd.norm_a2;
    t.trace_a3[k] = nd.trace_a3;
    t.scal[k] = nd.scal;
    t.ric_nn[k] = nd.ric_nn;
    t.laplace_phi[k] = contract(gi, hphi);
    t.laplace_psi[k] = contract(gi, hpsi);
    t.a_hess_phi[k] = contract(a_up, hphi);
    t.a_hess_psi[k] = contract(a_up, hpsi);
    t.omega_grad_phi[k] = nd.omega[0] * gphi[0] + nd.omega[1] * gphi[1];
    t.omega_grad_psi[k] = nd.omega[0] * gpsi[0] + nd.omega[1] * gpsi[1];
    t.grad_h_grad_psi[k] = dh.t[k] * gpsi[0] + dh.p[k] * gpsi[1];
    t.grad_phi_grad_psi[k] = dphi.t[k] * gpsi[0] + dphi.p[k] * gpsi[1];
    double agg = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) agg += nd.second_form[a][b] * gphi[a] * gpsi[b];
    t.a_grad_phi_grad_psi[k] = agg;
    t.div_omega[k] = (dvt.t[k] + dvp.p[k]) / nd.area_density;
    t.mixed_contraction[k] = contract(a_up, nd.mixed);
  }
  t.boundary_phi = boundary_robin_defect(grid, geo, phi, dphi);
  t.boundary_psi = boundary_robin_defect(grid, geo, psi, dpsi);
  return t;
}

double first_variation_area(const VariationContext& ctx, const VariationField& phi) {
  // No derivatives of phi here, so the surface quadrature (exact for the area) applies.
  std::vector<double> hp(phi.phi.size());
  for (std::size_t k = 0; k < hp.size(); ++k) hp[k] = ctx.geometry.nodes[k].mean_curvature * phi.phi[k];
  const HemisphereGrid& grid = ctx.surface.grid;
  std::vector<double> flux(ctx.geometry.boundary.size());
  for (int j = 0; j < grid.n_phi(); ++j) {
    const std::size_t k = grid.index(grid.equator(), j);
    const NodeGeometry& nd = ctx.geometry.nodes[k];
    const Vec3 g = ctx.surface.ambient.metric_at(nd.w, nd.theta);
    const Vec3& nu = ctx.geometry.boundary[j].conormal;
    flux[j] = phi.phi[k] * (g[0] * nd.normal[0] * nu[0] + g[1] * nd.normal[1] * nu[1] + g[2] * nd.normal[2] * nu[2]);
  }
  return -ctx.geometry.integrate(hp) + ctx.geometry.boundary_integrate(flux);
}

double index_form(const VariationContext& ctx, const VariationField& phi, const VariationField& psi) {
  return ctx.op.bilinear(phi.phi, psi.phi);
}

double first_variation_mass(const VariationContext& ctx, const VariationField& phi) {
  const SurfaceGeometry& geo = ctx.geometry;
  const double area = geo.area;
  const std::vector<double> lap = ctx.op.laplacian(phi.phi);
  std::vector<double> h_lap(lap.size()), rest(lap.size());
  for (std::size_t k = 0; k < lap.size(); ++k) {
    const NodeGeometry& nd = geo.nodes[k];
    h_lap[k] = nd.mean_curvature * lap[k];
    const double bracket = (ctx.lambda - nd.scal) + 2.0 * nd.gauss_curvature - 4.0 * kPi / area +
                           geo.h2_integral / (2.0 * area) - nd.norm_a2;
    rest[k] = bracket * nd.mean_curvature * phi.phi[k];
  }
  return prefactor(area) * (-2.0 * fv_integral(ctx.op, h_lap) + fv_integral(ctx.op, rest));
}

std::vector<double> jacobi_derivative(const VariationContext& ctx, const VariationField& phi,
                                      const VariationField& psi) {
  const VariationTerms t = variation_terms(ctx.surface, ctx.geometry, phi.phi, psi.phi, ctx.lambda);
  std::vector<double> out(phi.phi.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double f = phi.phi[k], g = psi.phi[k], h = t.mean_curvature[k];
    out[k] = 2.0 * f * t.a_hess_psi[k] + 2.0 * g * t.a_hess_phi[k] - 2.0 * f * t.omega_grad_psi[k] -
             2.0 * g * t.omega_grad_phi[k] + f * t.grad_h_grad_psi[k] - h * t.grad_phi_grad_psi[k] +
             2.0 * t.a_grad_phi_grad_psi[k] - g * t.div_omega[k] - f * g * h * t.gauss_curvature[k] +
             f * g * h * t.ric_nn[k] + f * g * h * t.norm_a2[k] + f * g * t.trace_a3[k] +
             f * g * t.mixed_contraction[k];
  }
  return out;
}

std::vector<double> jacobi_derivative_slice_form(const VariationContext& ctx, const VariationField& phi,
                                                 const VariationField& psi) {
  const VariationTerms t = variation_terms(ctx.surface, ctx.geometry, phi.phi, psi.phi, ctx.lambda);
  std::vector<double> out(phi.phi.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double f = phi.phi[k], g = psi.phi[k], h = t.mean_curvature[k];
    out[k] = h * (f * t.laplace_psi[k] + g * t.laplace_phi[k]) +
             f * g * h * (-t.gauss_curvature[k] + 1.5 * t.ric_nn[k] + 0.75 * h * h);
  }
  return out;
}

SecondVariationTerms second_variation_mass(const VariationContext& ctx, const VariationField& phi,
                                           double critical_tol) {
  const double first = first_variation_mass(ctx, phi);
  if (std::abs(first) > critical_tol) {
    throw PreconditionError("second_variation_mass: surface is not critical for this variation");
  }
  const SurfaceGeometry& geo = ctx.geometry;
  const double area = geo.area;
  const double c = prefactor(area);
  const double mt = modified_hawking_mass(geo, ctx.lambda);
  const double lam = ctx.lambda;
  const std::vector<double> lphi = ctx.op.apply(phi.phi);
  const std::vector<double> lprime = jacobi_derivative(ctx, phi, phi);
  const VariationTerms t = variation_terms(ctx.surface, geo, phi.phi, phi.phi, lam);

  const std::size_t n = lphi.size();
  std::vector<double> hphi(n), op_term(n), lam_term(n), mean_term(n), area_term(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double h = geo.nodes[k].mean_curvature, f = phi.phi[k];
    const double flpf = f * lphi[k] - h * h * f * f;
    hphi[k] = h * f;
    op_term[k] = lphi[k] * lphi[k] + h * lprime[k];
    lam_term[k] = (h * h + 2.0 * lam / 3.0) * flpf;
    mean_term[k] = h * h * f * lphi[k];
    area_term[k] = flpf + t.accel_divergence[k];
  }
  std::vector<double> b_lam(t.boundary_phi.size()), b_area(t.boundary_phi.size());
  const HemisphereGrid& grid = ctx.surface.grid;
  for (int j = 0; j < grid.n_phi(); ++j) {
    const std::size_t k = grid.index(grid.equator(), j);
    const double h = geo.nodes[k].mean_curvature;
    b_area[j] = t.boundary_phi[j] * phi.phi[k];
    b_lam[j] = (h * h + 2.0 * lam / 3.0) * b_area[j];
  }

  SecondVariationTerms r;
  const double flux = fv_integral(ctx.op, hphi);
  r.flux_term = -3.0 * mt / (4.0 * area * area) * flux * flux;
  r.operator_term = -2.0 * c * fv_integral(ctx.op, op_term);
  r.lambda_term = c * fv_integral(ctx.op, lam_term);
  r.mean_term = 4.0 * c * fv_integral(ctx.op, mean_term);
  r.area_term = -mt / (2.0 * area) * fv_integral(ctx.op, area_term);
  r.boundary_lambda_term = -c * boundary_sum(ctx.op, b_lam);
  r.boundary_area_term = mt / (2.0 * area) * boundary_sum(ctx.op, b_area);
  r.total = r.flux_term + r.operator_term + r.lambda_term + r.mean_term + r.area_term + r.boundary_lambda_term +
            r.boundary_area_term;
  return r;
}

namespace {

struct Point2 {
  double s, theta, vs, vt;
};

Point2 geodesic_rhs(const Ambient& amb, const Point2& p) {
  const MetricJet j = amb.jet(p.s, p.theta);
  const double v[3] = {p.vs, p.vt, 0.0};
  double acc[2] = {0.0, 0.0};
  for (int k = 0; k < 2; ++k) {
    double a = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int l = 0; l < 3; ++l) {
        double gam = 0.0;
        if (l == k) gam += j.dg[i][k];
        if (i == k) gam += j.dg[l][k];
        if (i == l) gam -= j.dg[k][i];
        a += 0.5 * gam / j.g[k] * v[i] * v[l];
      }
    acc[k] = -a;
  }
  return {p.vs, p.vt, acc[0], acc[1]};
}

Point2 shoot_point(const Ambient& amb, Point2 p, int steps) {
  const double dt = 1.0 / steps;
  auto axpy = [](const Point2& a, const Point2& d, double c) {
    return Point2{a.s + c * d.s, a.theta + c * d.theta, a.vs + c * d.vs, a.vt + c * d.vt};
  };
  for (int n = 0; n < steps; ++n) {
    const Point2 k1 = geodesic_rhs(amb, p);
    const Point2 k2 = geodesic_rhs(amb, axpy(p, k1, 0.5 * dt));
    const Point2 k3 = geodesic_rhs(amb, axpy(p, k2, 0.5 * dt));
    const Point2 k4 = geodesic_rhs(amb, axpy(p, k3, dt));
    p.s += dt / 6.0 * (k1.s + 2 * k2.s + 2 * k3.s + k4.s);
    p.theta += dt / 6.0 * (k1.theta + 2 * k2.theta + 2 * k3.theta + k4.theta);
    p.vs += dt / 6.0 * (k1.vs + 2 * k2.vs + 2 * k3.vs + k4.vs);
    p.vt += dt / 6.0 * (k1.vt + 2 * k2.vt + 2 * k3.vt + k4.vt);
  }
  return p;
}

// Six-point Lagrange interpolation of scattered (x, y) samples sorted in x.
double lagrange6(const std::vector<std::pair<double, double>>& pts, double x) {
  auto it = std::lower_bound(pts.begin(), pts.end(), x,
                             [](const std::pair<double, double>& p, double v) { return p.first < v; });
  std::ptrdiff_t hi = it - pts.begin();
  std::ptrdiff_t lo = std::clamp<std::ptrdiff_t>(hi - 3, 0, static_cast<std::ptrdiff_t>(pts.size()) - 6);
  double acc = 0.0;
  for (std::ptrdiff_t i = lo; i < lo + 6; ++i) {
    double l = 1.0;
    for (std::ptrdiff_t k = lo; k < lo + 6; ++k)
      if (k != i) l *= (x - pts[k].first) / (pts[i].first - pts[k].first);
    acc += l * pts[i].second;
  }
  return acc;
}

double mass_of(const GraphSurface& s, double lambda) { return modified_hawking_mass(compute_geometry(s), lambda); }

GraphSurface varied(const GraphSurface& surface, const SurfaceGeometry& geo, const std::vector<double>& phi, double t,
                    Gauge gauge) {
  return gauge == Gauge::NormalGeodesic ? normal_geodesic_variation(surface, geo, phi, t)
                                        : vertical_variation(surface, geo, phi, t);
}

}  // namespace

std::array<double, 2> geodesic_endpoint(const Ambient& ambient, double s, double theta, double vs, double vt,
                                        int steps) {
  const Point2 end = shoot_point(ambient, {s, theta, vs, vt}, steps);
  return {end.s, end.theta};
}

GraphSurface normal_geodesic_variation(const GraphSurface& surface, const SurfaceGeometry& geometry,
                                       const std::vector<double>& phi, double t) {
  const HemisphereGrid& grid = surface.grid;
  if (surface.is_slice()) {
    // Normal geodesics of slices are the s-lines.
    std::vector<double> w(surface.w);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] += t * phi[k];
    return GraphSurface(surface.ambient, grid, std::move(w), surface.admissible);
  }
  if (!grid.axisym()) {
    throw PreconditionError("normal_geodesic_variation: non-slice surfaces must be axisymmetric");
  }
  std::vector<std::pair<double, double>> pts;
  pts.reserve(3 * grid.size());
  for (int i = 0; i < grid.n_theta(); ++i) {
    const NodeGeometry& nd = geometry.nodes[i];
    const auto [s_end, theta_end] =
        geodesic_endpoint(surface.ambient, nd.w, nd.theta, t * phi[i] * nd.normal[0], t * phi[i] * nd.normal[1]);
    pts.emplace_back(theta_end, s_end);
    pts.emplace_back(-theta_end, s_end);
    if (i + 1 < grid.n_theta()) pts.emplace_back(kPi - theta_end, s_end);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> w(grid.size());
  for (int i = 0; i < grid.n_theta(); ++i) w[i] = lagrange6(pts, grid.theta(i));
  return GraphSurface(surface.ambient, grid, std::move(w), surface.admissible);
}

namespace {

// Sixth-order centered d/dtheta of an axisymmetric field that is even about
// the pole and the equator.
std::vector<double> theta_derivative6(const HemisphereGrid& grid, const std::vector<double>& f) {
  const int n = grid.n_theta();
  auto value = [&](int i) {
    if (i < 0) i = -1 - i;
    if (i > n - 1) i = 2 * (n - 1) - i;
    return f[static_cast<std::size_t>(i)];
  };
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) {
    d[i] = (-value(i - 3) + 9.0 * value(i - 2) - 45.0 * value(i - 1) + 45.0 * value(i + 1) -
            9.0 * value(i + 2) + value(i + 3)) / (60.0 * grid.h());
  }
  return d;
}

}  // namespace

GraphSurface vertical_variation(const GraphSurface& surface, const SurfaceGeometry& geometry,
                                const std::vector<double>& phi, double t) {
  std::vector<double> w(surface.w);
  if (surface.grid.axisym()) {
    // Vertical speed phi / N^s with N^s = (1 + w_theta^2 / A^2)^(-1/2).
    const auto wt = theta_derivative6(surface.grid, surface.w);
    for (int i = 0; i < surface.grid.n_theta(); ++i) {
      const double a = surface.ambient.comp_a(surface.w[i], surface.grid.theta(i));
      w[i] += t * phi[i] * std::sqrt(1.0 + wt[i] * wt[i] / (a * a));
    }
    return GraphSurface(surface.ambient, surface.grid, std::move(w), surface.admissible);
  }
  for (std::size_t k = 0; k < w.size(); ++k) w[k] += t * phi[k] / geometry.nodes[k].normal[0];
  return GraphSurface(surface.ambient, surface.grid, std::move(w), surface.admissible);
}

void richardson(FdStudy& study, double scale) {
  const auto& d = study.fd;
  study.observed_order = std::numeric_limits<double>::quiet_NaN();
  study.best_fd = d.back();
  if (d.size() >= 2) study.best_fd = d.back() + (d.back() - d[d.size() - 2]) / 3.0;
  if (d.size() >= 3) {
    const double d1 = std::abs(d[d.size() - 3] - d[d.size() - 2]);
    const double d2 = std::abs(d[d.size() - 2] - d.back());
    const double ratio = study.steps[study.steps.size() - 3] / study.steps[study.steps.size() - 2];
    const double floor = 1e-13 * std::max({std::abs(d.back()), std::abs(study.formula), 1e-300});
    if (d1 > floor && d2 > floor) study.observed_order = std::log(d1 / d2) / std::log(ratio);
  }
  study.absolute_error = std::abs(d.back() - study.formula);
  study.relative_error = study.absolute_error / std::max(std::abs(study.formula), scale);
}

FdStudy first_variation_mass_study(const GraphSurface& surface, const std::vector<double>& phi, double lambda,
                                   const std::vector<double>& steps, Gauge gauge) {
  const SurfaceGeometry geo = compute_geometry(surface);
  const JacobiOperator op = assemble_jacobi(surface, geo);
  FdStudy st;
  st.formula = first_variation_mass({surface, geo, op, lambda}, {phi, true});
  st.steps = steps;
  for (double e : steps) {
    const double mp = mass_of(varied(surface, geo, phi, e, gauge), lambda);
    const double mm = mass_of(varied(surface, geo, phi, -e, gauge), lambda);
    st.fd.push_back((mp - mm) / (2.0 * e));
  }
  richardson(st, 1e-12);
  return st;
}

FdStudy second_variation_mass_study(const GraphSurface& surface, const std::vector<double>& phi, double lambda,
                                    const std::vector<double>& steps, Gauge gauge) {
  const SurfaceGeometry geo = compute_geometry(surface);
  const JacobiOperator op = assemble_jacobi(surface, geo);
  FdStudy st;
  st.formula = second_variation_mass({surface, geo, op, lambda}, {phi, true}, 1e-6).total;
  st.steps = steps;
  const double m0 = modified_hawking_mass(geo, lambda);
  for (double e : steps) {
    const double mp = mass_of(varied(surface, geo, phi, e, gauge), lambda);
    const double mm = mass_of(varied(surface, geo, phi, -e, gauge), lambda);
    st.fd.push_back((mp - 2.0 * m0 + mm) / (e * e));
  }
  richardson(st, 1e-12);
  return st;
}

FdStudy first_variation_area_study(const GraphSurface& surface, const std::vector<double>& phi,
                                   const std::vector<double>& steps) {
  const SurfaceGeometry geo = compute_geometry(surface);
  const JacobiOperator op = assemble_jacobi(surface, geo);
  FdStudy st;
  st.formula = first_variation_area({surface, geo, op, 2.0}, {phi, true});
  st.steps = steps;
  for (double e : steps) {
    const double ap = compute_geometry(normal_geodesic_variation(surface, geo, phi, e)).area;
    const double am = compute_geometry(normal_geodesic_variation(surface, geo, phi, -e)).area;
    st.fd.push_back((ap - am) / (2.0 * e));
  }
  richardson(st, 1e-12);
  return st;
}

FdStudy second_variation_area_study(const GraphSurface& surface, const std::vector<double>& phi,
                                    const std::vector<double>& steps) {
  const SurfaceGeometry geo = compute_geometry(surface);
  const JacobiOperator op = assemble_jacobi(surface, geo);
  FdStudy st;
  st.formula = index_form({surface, geo, op, 2.0}, {phi, true}, {phi, true});
  st.steps = steps;
  for (double e : steps) {
    const double ap = compute_geometry(normal_geodesic_variation(surface, geo, phi, e)).area;
    const double am = compute_geometry(normal_geodesic_variation(surface, geo, phi, -e)).area;
    st.fd.push_back((ap - 2.0 * geo.area + am) / (e * e));
  }
  richardson(st, 1e-12);
  return st;
}

std::vector<double> jacobi_derivative_fd(const GraphSurface& surface, const std::vector<double>& phi,
                                         const std::vector<double>& psi, double eps) {
  const SurfaceGeometry geo = compute_geometry(surface);
  auto l_at = [&](double t) {
    const GraphSurface s = normal_geodesic_variation(surface, geo, phi, t);
    const SurfaceGeometry g = compute_geometry(s);
    return assemble_jacobi(s, g).apply(psi);
  };
  const std::vector<double> lp = l_at(eps), lm = l_at(-eps);
  std::vector<double> out(lp.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = (lp[k] - lm[k]) / (2.0 * eps);
  return out;
}

void write_fd_study_json(const FdStudy& study, std::ostream& out) {
  out << std::setprecision(17) << "{\"formula\": " << study.formula << ", \"steps\": [";
  for (std::size_t k = 0; k < study.steps.size(); ++k) out << (k ? ", " : "") << study.steps[k];
  out << "], \"fd\": [";
  for (std::size_t k = 0; k < study.fd.size(); ++k) out << (k ? ", " : "") << study.fd[k];
  out << "], \"observed_order\": ";
  if (std::isnan(study.observed_order)) out << "null";
  else out << study.observed_order;
  out << ", \"best_fd\": " << study.best_fd << ", \"absolute_error\": " << study.absolute_error
      << ", \"relative_error\": " << study.relative_error << "}";
}

}  // namespace hawking
