#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "hawking/spectral.hpp"
#include "hawking/surface.hpp"

namespace hawking {

/// Normal speed phi per node. Admissible fields satisfy the discrete Neumann
/// (Robin with Pi = 0) condition on the equator through the reflection ghosts.
struct VariationField {
  std::vector<double> phi;
  bool admissible = true;
};

/// Pointwise ingredients of the variation formulas for a pair (phi, psi).
struct VariationTerms {
  double lambda = 0.0;  // Lambda (lower bound of R)
  std::vector<double> mean_curvature, gauss_curvature, norm_a2, trace_a3, scal, ric_nn;
  std::vector<double> laplace_phi, laplace_psi;
  std::vector<double> a_hess_phi, a_hess_psi;  // g(A, Hess)
  std::vector<double> omega_grad_phi, omega_grad_psi;
  std::vector<double> grad_h_grad_psi;         // g(grad H, grad psi)
  std::vector<double> grad_phi_grad_psi;
  std::vector<double> a_grad_phi_grad_psi;     // A(grad phi, grad psi)
  std::vector<double> div_omega;               // divergence of the 1-form omega
  std::vector<double> mixed_contraction;       // R(e_i, N, N, e_j) A_ij
  std::vector<double> accel_divergence;        // div(nabla_X X); zero in the normal-geodesic gauge
  std::vector<double> boundary_phi;            // d_nu phi - Pi(N,N) phi per equator node
  std::vector<double> boundary_psi;
};

VariationTerms variation_terms(const GraphSurface& surface, const SurfaceGeometry& geometry,
                               const std::vector<double>& phi, const std::vector<double>& psi, double lambda);

/// Everything needed to evaluate the formulas on one surface.
struct VariationContext {
  const GraphSurface& surface;
  const SurfaceGeometry& geometry;
  const JacobiOperator& op;
  double lambda = 2.0;
};

/// -int H phi + boundary integral of phi g(N, nu).
double first_variation_area(const VariationContext& ctx, const VariationField& phi);

/// Q(phi, psi) in weak form: phi^T K psi.
double index_form(const VariationContext& ctx, const VariationField& phi, const VariationField& psi);

/// d/dt of the modified Hawking mass (chi = 1).
double first_variation_mass(const VariationContext& ctx, const VariationField& phi);

/// Pointwise first variation of the Jacobi operator applied to psi.
std::vector<double> jacobi_derivative(const VariationContext& ctx, const VariationField& phi,
                                      const VariationField& psi);

/// Umbilic closed form on slices: H (phi Lap psi + psi Lap phi) + phi psi H (-K + 3/2 Ric(N,N) + 3/4 H^2).
std::vector<double> jacobi_derivative_slice_form(const VariationContext& ctx, const VariationField& phi,
                                                 const VariationField& psi);

struct SecondVariationTerms {
  double flux_term = 0.0;         // -(3 m / 4 a^2) (int H phi)^2
  double operator_term = 0.0;     // -2c int ((L phi)^2 + H L'(0) phi)
  double lambda_term = 0.0;       // c int (H^2 + 2 Lambda / 3)(phi L phi - H^2 phi^2)
  double mean_term = 0.0;         // 4c int H^2 phi L phi
  double area_term = 0.0;         // -(m / 2a) int (phi L phi - H^2 phi^2 + div(nabla_X X))
  double boundary_lambda_term = 0.0;
  double boundary_area_term = 0.0;
  double total = 0.0;
};

/// Second variation of the modified Hawking mass at a critical surface in the
/// normal-geodesic gauge. Throws PreconditionError when |first variation| >
/// critical_tol.
SecondVariationTerms second_variation_mass(const VariationContext& ctx, const VariationField& phi,
                                           double critical_tol = 1e-8);

/// Surface reached by flowing each node for time t along the geodesic with
/// initial velocity phi N. Exact on slices; on axisymmetric graphs the
/// endpoints are re-gridded by local Lagrange interpolation.
GraphSurface normal_geodesic_variation(const GraphSurface& surface, const SurfaceGeometry& geometry,
                                       const std::vector<double>& phi, double t);

/// Unit-time endpoint (s, theta) of the geodesic through (s, theta) with
/// initial velocity (vs, vt) and no phi-component (RK4).
std::array<double, 2> geodesic_endpoint(const Ambient& ambient, double s, double theta, double vs, double vt,
                                        int steps = 8);

/// Non-geodesic comparison gauge: w + t phi |n| (straight s-lines).
GraphSurface vertical_variation(const GraphSurface& surface, const SurfaceGeometry& geometry,
                                const std::vector<double>& phi, double t);

enum class Gauge { NormalGeodesic, Vertical };

struct FdStudy {
  double formula = 0.0;
  std::vector<double> steps;
  std::vector<double> fd;            // central differences per step
  double observed_order = 0.0;       // from the fd values themselves (NaN if flat)
  double best_fd = 0.0;              // Richardson-extrapolated value
  double absolute_error = 0.0;       // |fd at the finest step - formula|
  double relative_error = 0.0;       // absolute_error / max(|formula|, scale)
};

/// d/dt m_tilde: formula vs central first differences.
FdStudy first_variation_mass_study(const GraphSurface& surface, const std::vector<double>& phi, double lambda,
                                   const std::vector<double>& steps, Gauge gauge = Gauge::NormalGeodesic);
/// d^2/dt^2 m_tilde: formula vs central second differences.
FdStudy second_variation_mass_study(const GraphSurface& surface, const std::vector<double>& phi, double lambda,
                                    const std::vector<double>& steps, Gauge gauge = Gauge::NormalGeodesic);
/// d/dt |Sigma_t| vs the first variation of area.
FdStudy first_variation_area_study(const GraphSurface& surface, const std::vector<double>& phi,
                                   const std::vector<double>& steps);
/// d^2/dt^2 |Sigma_t| vs Q(phi, phi) (minimal surfaces).
FdStudy second_variation_area_study(const GraphSurface& surface, const std::vector<double>& phi,
                                    const std::vector<double>& steps);

/// (L_{Sigma_eps} psi - L_{Sigma_-eps} psi) / (2 eps), psi held as graph data.
std::vector<double> jacobi_derivative_fd(const GraphSurface& surface, const std::vector<double>& phi,
                                         const std::vector<double>& psi, double eps);

/// Order and extrapolation from central differences at steps e, e/2, e/4, ...
void richardson(FdStudy& study, double scale);

void write_fd_study_json(const FdStudy& study, std::ostream& out);

}  // namespace hawking
