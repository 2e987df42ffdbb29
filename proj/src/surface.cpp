#include "hawking/surface.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "hawking/errors.hpp"

namespace hawking {

GraphSurface::GraphSurface(Ambient amb, HemisphereGrid g, std::vector<double> values, bool admissible_graph)
    : ambient(std::move(amb)), grid(g), w(std::move(values)), admissible(admissible_graph) {
  if (w.size() != grid.size()) throw GeometryError("GraphSurface: field size does not match grid");
}

bool GraphSurface::is_slice(double tol) const {
  const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
  return *hi - *lo <= tol;
}

GraphSurface slice_surface(const Ambient& ambient, double s0, const HemisphereGrid& grid) {
  return GraphSurface(ambient, grid, std::vector<double>(grid.size(), s0), true);
}

namespace {

Mat2 inverse(const Mat2& m, double& det) {
  det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

}  // namespace

SurfaceGeometry compute_geometry(const GraphSurface& surface) {
  const HemisphereGrid& grid = surface.grid;
  const Ambient& amb = surface.ambient;
  const FieldDerivatives d = field_derivatives(grid, surface.w, {}, !surface.admissible);

  SurfaceGeometry geo{grid, {}, {}};
  geo.nodes.resize(grid.size());
  std::vector<double> g_tp(grid.size()), g_pp(grid.size());

  for (int i = 0; i < grid.n_theta(); ++i) {
    for (int j = 0; j < grid.n_phi(); ++j) {
      const std::size_t k = grid.index(i, j);
      NodeGeometry& nd = geo.nodes[k];
      nd.w = surface.w[k];
      nd.theta = grid.theta(i);
      nd.w_t = d.t[k];
      nd.w_p = d.p[k];
      const PointCurvature pc = amb.point_curvature(nd.w, nd.theta);
      const Vec3& g = pc.jet.g;

      nd.x_t = {nd.w_t, 1.0, 0.0};
      nd.x_p = {nd.w_p, 0.0, 1.0};
      nd.metric = {{{pc.dot(nd.x_t, nd.x_t), pc.dot(nd.x_t, nd.x_p)},
                    {pc.dot(nd.x_p, nd.x_t), pc.dot(nd.x_p, nd.x_p)}}};
      double det = 0.0;
      nd.metric_inv = inverse(nd.metric, det);
      if (!(det > 1e-14 * g[1] * g[2]) || !std::isfinite(det)) {
        throw GeometryError("compute_geometry: degenerate induced metric");
      }
      nd.area_density = std::sqrt(det);
      g_tp[k] = nd.metric[0][1];
      g_pp[k] = nd.metric[1][1];

      // Normal from the covector ds - w_t dtheta - w_p dphi.
      const Vec3 cov{1.0, -nd.w_t, -nd.w_p};
      const double len = std::sqrt(cov[0] * cov[0] / g[0] + cov[1] * cov[1] / g[1] + cov[2] * cov[2] / g[2]);
      for (int c = 0; c < 3; ++c) nd.normal[c] = cov[c] / (g[c] * len);

      // A_ab = N_k (d_a d_b X^k + Gamma^k_ij X^i_a X^j_b); only X^s has
      // second derivatives.
      const std::array<const Vec3*, 2> xs{&nd.x_t, &nd.x_p};
      const Mat2 wab{{{d.tt[k], d.tp[k]}, {d.tp[k], d.pp[k]}}};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double acc = 0.0;
          for (int kk = 0; kk < 3; ++kk) {
            double comp = (kk == 0) ? wab[a][b] : 0.0;
            for (int ii = 0; ii < 3; ++ii)
              for (int jj = 0; jj < 3; ++jj) comp += pc.christoffel[kk][ii][jj] * (*xs[a])[ii] * (*xs[b])[jj];
            acc += (cov[kk] / len) * comp;
          }
          nd.second_form[a][b] = acc;
        }
      nd.shape = mul(nd.metric_inv, nd.second_form);
      nd.mean_curvature = nd.shape[0][0] + nd.shape[1][1];
      const Mat2 s2 = mul(nd.shape, nd.shape);
      nd.norm_a2 = s2[0][0] + s2[1][1];
      const Mat2 s3 = mul(s2, nd.shape);
      nd.trace_a3 = s3[0][0] + s3[1][1];
      const double det_shape = nd.shape[0][0] * nd.shape[1][1] - nd.shape[0][1] * nd.shape[1][0];
      nd.gauss_curvature = pc.rm(nd.x_t, nd.x_p, nd.x_p, nd.x_t) / det + det_shape;

      nd.ric_nn = pc.ric(nd.normal, nd.normal);
      nd.scal = pc.scalar;
      for (int a = 0; a < 2; ++a) {
        nd.omega[a] = pc.ric(*xs[a], nd.normal);
        for (int b = 0; b < 2; ++b) nd.mixed[a][b] = pc.rm(*xs[a], nd.normal, nd.normal, *xs[b]);
      }
    }
  }

  // Boundary ring.
  const bool one_sided = !surface.admissible;
  const FieldDerivatives dtp = field_derivatives(grid, g_tp, {-1.0, -1.0}, one_sided);
  const FieldDerivatives dpp = field_derivatives(grid, g_pp, {}, one_sided);
  const int e = grid.equator();
  for (int j = 0; j < grid.n_phi(); ++j) {
    const std::size_t k = grid.index(e, j);
    const NodeGeometry& nd = geo.nodes[k];
    BoundaryNodeGeometry b;
    b.phi_index = j;
    b.line_density = std::sqrt(nd.metric[1][1]);
    const auto& gi = nd.metric_inv;
    const double christ_t_pp = 0.5 * gi[0][0] * (2.0 * dtp.p[k] - dpp.t[k]) + 0.5 * gi[0][1] * dpp.p[k];
    b.geodesic_curvature = -christ_t_pp / (nd.metric[1][1] * std::sqrt(gi[0][0]));
    for (int c = 0; c < 3; ++c) {
      b.conormal[c] = (gi[0][0] * nd.x_t[c] + gi[0][1] * nd.x_p[c]) / std::sqrt(gi[0][0]);
    }
    const Vec3 g = amb.metric_at(nd.w, std::numbers::pi / 2);
    const double a = std::sqrt(g[1]);
    const double cosang = std::clamp(g[1] * nd.normal[1] / a, -1.0, 1.0);
    b.contact_angle = std::acos(cosang);
    b.pi_nn = amb.boundary_second_form(nd.w, nd.normal, nd.normal);
    b.boundary_mean_curvature = amb.boundary_mean_curvature(nd.w);
    geo.boundary.push_back(b);
  }

  std::vector<double> dens(grid.size()), h2(grid.size()), kk(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const NodeGeometry& nd = geo.nodes[k];
    dens[k] = nd.area_density;
    h2[k] = nd.mean_curvature * nd.mean_curvature * nd.area_density;
    kk[k] = nd.gauss_curvature * nd.area_density;
  }
  geo.area = grid.integrate(dens);
  geo.h2_integral = grid.integrate(h2);
  geo.gauss_integral = grid.integrate(kk);
  std::vector<double> ones(geo.boundary.size(), 1.0), kg(geo.boundary.size());
  for (std::size_t j = 0; j < kg.size(); ++j) kg[j] = geo.boundary[j].geodesic_curvature;
  geo.boundary_length = geo.boundary_integrate(ones);
  geo.geodesic_curvature_integral = geo.boundary_integrate(kg);
  return geo;
}

double SurfaceGeometry::integrate(const std::vector<double>& f) const {
  std::vector<double> g(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) g[k] = f[k] * nodes[k].area_density;
  return grid.integrate(g);
}

double SurfaceGeometry::boundary_integrate(const std::vector<double>& f) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < boundary.size(); ++j) acc += f[j] * boundary[j].line_density;
  return acc * grid.h_phi();
}

std::vector<double> SurfaceGeometry::mean_curvature() const {
  std::vector<double> h(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) h[k] = nodes[k].mean_curvature;
  return h;
}

double SurfaceGeometry::gauss_bonnet_residual() const {
  return gauss_integral + geodesic_curvature_integral - 2.0 * std::numbers::pi;
}

double SurfaceGeometry::max_gauss_equation_residual() const {
  double worst = 0.0;
  for (const auto& nd : nodes) {
    const double r = 2.0 * nd.ric_nn - nd.scal + 2.0 * nd.gauss_curvature - nd.mean_curvature * nd.mean_curvature +
                     nd.norm_a2;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double SurfaceGeometry::max_umbilic_defect() const {
  double worst = 0.0;
  for (const auto& nd : nodes) {
    worst = std::max(worst, nd.norm_a2 - 0.5 * nd.mean_curvature * nd.mean_curvature);
  }
  return worst;
}

std::vector<double> contact_angle(const GraphSurface& surface) {
  const SurfaceGeometry geo = compute_geometry(surface);
  std::vector<double> out;
  for (const auto& b : geo.boundary) out.push_back(b.contact_angle);
  return out;
}

DoubledSummary double_surface(const GraphSurface& surface, const SurfaceGeometry& geometry) {
  if (!surface.admissible) {
    throw GeometryError("double_surface: reflection of an inadmissible graph has a corner");
  }
  return {2.0 * geometry.area, 2.0 * geometry.h2_integral, 2};
}

void write_surface_csv(const GraphSurface& surface, std::ostream& out) {
  out << "theta,phi,w\n" << std::setprecision(17);
  const auto& g = surface.grid;
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 0; j < g.n_phi(); ++j) out << g.theta(i) << ',' << g.phi(j) << ',' << surface.w[g.index(i, j)] << '\n';
}

void write_geometry_csv(const GraphSurface& surface, const SurfaceGeometry& geometry, std::ostream& out) {
  out << "theta,phi,w,H,K,A2,ric_nn,scal\n" << std::setprecision(17);
  const auto& g = surface.grid;
  for (int i = 0; i < g.n_theta(); ++i)
    for (int j = 0; j < g.n_phi(); ++j) {
      const auto& nd = geometry.nodes[g.index(i, j)];
      out << g.theta(i) << ',' << g.phi(j) << ',' << nd.w << ',' << nd.mean_curvature << ',' << nd.gauss_curvature
          << ',' << nd.norm_a2 << ',' << nd.ric_nn << ',' << nd.scal << '\n';
    }
}

}  // namespace hawking
