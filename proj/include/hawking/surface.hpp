#pragma once

#include <iosfwd>
#include <vector>

#include "hawking/ambient.hpp"
#include "hawking/grid.hpp"

namespace hawking {

/// Graph s = w(theta, phi) over the hemisphere slice chart.
///
/// Admissible graphs satisfy the discrete Neumann condition at the equator by
/// construction (even-reflection ghosts); inadmissible ones are evaluated with
/// one-sided stencils and only serve contact-angle diagnostics.
struct GraphSurface {
  Ambient ambient;
  HemisphereGrid grid;
  std::vector<double> w;
  bool admissible = true;

  GraphSurface(Ambient amb, HemisphereGrid g, std::vector<double> values, bool admissible_graph = true);

  /// True when w is constant (a slice).
  bool is_slice(double tol = 0.0) const;
};

/// w = s0 on every node.
GraphSurface slice_surface(const Ambient& ambient, double s0, const HemisphereGrid& grid);

/// Per-node extrinsic and intrinsic geometry. Coordinate components refer to
/// the chart (theta, phi); ambient vectors to (s, theta, phi).
struct NodeGeometry {
  double w = 0.0;
  double theta = 0.0;
  double w_t = 0.0, w_p = 0.0;
  Vec3 x_t{}, x_p{};             // tangent vectors d_theta X, d_phi X
  Vec3 normal{};                 // unit normal N (vector components), N ~ +d_s
  Mat2 metric{};                 // induced metric gamma_ab
  Mat2 metric_inv{};
  double area_density = 0.0;     // sqrt(det gamma)
  Mat2 second_form{};            // A_ab = g(-nabla_a N, d_b) = g(N, nabla_a d_b X)
  Mat2 shape{};                  // S^a_b = gamma^{ac} A_cb
  double mean_curvature = 0.0;   // tr A
  double gauss_curvature = 0.0;
  double norm_a2 = 0.0;          // |A|^2
  double trace_a3 = 0.0;         // A_ij A_jk A_ki
  double ric_nn = 0.0;
  double scal = 0.0;
  Mat2 mixed{};                  // R(d_a X, N, N, d_b X)
  std::array<double, 2> omega{}; // Ric(d_a X, N)
};

struct BoundaryNodeGeometry {
  int phi_index = 0;
  double line_density = 0.0;  // |d_phi X| on the equator
  double geodesic_curvature = 0.0;
  double contact_angle = 0.0;  // angle between N and the boundary normal X
  double pi_nn = 0.0;          // Pi(N, N)
  double boundary_mean_curvature = 0.0;
  Vec3 conormal{};             // outward unit conormal nu
};

struct SurfaceGeometry {
  HemisphereGrid grid;
  std::vector<NodeGeometry> nodes;
  std::vector<BoundaryNodeGeometry> boundary;
  double area = 0.0;
  double boundary_length = 0.0;
  double h2_integral = 0.0;
  double gauss_integral = 0.0;
  double geodesic_curvature_integral = 0.0;

  /// Integral of a node field against the area element.
  double integrate(const std::vector<double>& f) const;
  /// Integral of a boundary field (one value per equator node) against ds.
  double boundary_integrate(const std::vector<double>& f) const;

  std::vector<double> mean_curvature() const;
  double gauss_bonnet_residual() const;  // int K + int k_g - 2 pi
  double max_gauss_equation_residual() const;
  double max_umbilic_defect() const;     // max |A|^2 - H^2/2
};

/// Throws GeometryError when the induced metric degenerates.
SurfaceGeometry compute_geometry(const GraphSurface& surface);

/// Angle between N and X per equator node.
std::vector<double> contact_angle(const GraphSurface& surface);

struct DoubledSummary {
  double area = 0.0;
  double h2_integral = 0.0;
  int chi = 2;
};

/// Totals of the even reflection across the equator. Throws GeometryError for
/// inadmissible surfaces.
DoubledSummary double_surface(const GraphSurface& surface, const SurfaceGeometry& geometry);

/// Columns theta, phi, w.
void write_surface_csv(const GraphSurface& surface, std::ostream& out);
/// Columns theta, phi, w, H, K, A2, ric_nn, scal.
void write_geometry_csv(const GraphSurface& surface, const SurfaceGeometry& geometry, std::ostream& out);

}  // namespace hawking
