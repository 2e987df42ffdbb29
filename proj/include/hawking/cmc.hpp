#pragma once

#include <iosfwd>
#include <vector>

#include "hawking/surface.hpp"

namespace hawking {

struct CmcOptions {
  double tol = 1e-12;      // max-norm of the residual
  int max_iter = 30;
  double fd_step = 1e-6;   // Jacobian column step
  int max_halvings = 12;   // damping on residual growth
};

struct CMCSolveReport {
  int iterations = 0;
  std::vector<double> residuals;  // max-norm per iterate, starting with the initial guess
  double condition_estimate = 0.0;
  bool converged = false;
  /// max r_{k+1} / r_k^2 over steps with r_k < 1e-2 and r_{k+1} above the
  /// 1e-9 roundoff floor (quadratic tail).
  double quadratic_constant = 0.0;
};

/// Reference leaf for the mean-zero constraint: its graph and area weights.
struct FoliationBase {
  Ambient ambient;
  HemisphereGrid grid;
  std::vector<double> w0;
  std::vector<double> weights;  // quadrature weights times area density of the reference leaf
  double area0 = 0.0;
};

FoliationBase make_base(const Ambient& ambient, const HemisphereGrid& grid, std::vector<double> w0);

struct FoliationState {
  double t = 0.0;
  std::vector<double> w;
  double mean_curvature = 0.0;
  std::vector<double> rho;        // lapse, filled by lapse_of_foliation
  double rho_bar = 0.0;
  double h_prime = 0.0;           // dH/dt, filled by lapse_of_foliation
  double mass = 0.0;
  double area = 0.0;
  std::vector<double> mu;         // w - w0
  double constraint_residual = 0.0;  // integral of (mu - t) over the reference leaf
};

struct LeafSolution {
  FoliationState state;
  CMCSolveReport report;
};

/// Bordered Newton solve for an axisymmetric CMC free-boundary leaf:
/// H_i(w) - Hbar = 0 at every node (the equator reflection ghosts enforce
/// orthogonality), and int (w - w0 - t) dsigma_0 = 0. Throws ConvergenceError
/// on failure (estimate = last residual) and GeometryError on a singular
/// Jacobian.
LeafSolution solve_cmc_leaf(const FoliationBase& base, double t, std::vector<double> w_init,
                            const CmcOptions& options = {}, double lambda = 2.0);

/// Newton solve of H(w) = 0 from w_init.
LeafSolution solve_minimal_leaf(const Ambient& ambient, const HemisphereGrid& grid, std::vector<double> w_init,
                                const CmcOptions& options = {}, double lambda = 2.0);

struct Foliation {
  FoliationBase base;
  double dt = 0.0;
  double lambda = 2.0;
  std::vector<FoliationState> leaves;  // increasing t, uniform spacing dt
  std::vector<CMCSolveReport> reports;
  CMCSolveReport base_report;
  bool halted = false;                 // continuation stopped before the requested window
  double t_min = 0.0, t_max = 0.0;     // achieved window
};

/// Continuation from the minimal leaf near the slice s0. Failed steps are
/// retried with halved substeps; leaves are stored on the uniform grid.
Foliation foliate(const Ambient& ambient, const HemisphereGrid& grid, double s0, double t_min, double t_max,
                  double dt, const CmcOptions& options = {}, double lambda = 2.0);

/// Index of the leaf with t = 0.
std::size_t base_leaf_index(const Foliation& foliation);

struct LapseReport {
  std::vector<double> t;
  std::vector<double> min_rho, max_rho;
  std::vector<double> route_gap;         // max |rho_graph - rho_geodesic| (NaN where unavailable)
  std::vector<double> jacobi_residual;   // rms of L rho - H' over the leaf (NaN at the ends)
  double max_route_gap = 0.0;
  double max_jacobi_residual = 0.0;
};

/// Fills rho, rho_bar, h_prime of every leaf from the normal displacement
/// rate w_t N^s (five-point differences in t) and audits it against normal
/// geodesic distances to neighbouring leaves and against H' = L rho.
/// Requires at least five leaves.
LapseReport lapse_of_foliation(Foliation& foliation);

struct Lemma33Report {
  double t = 0.0;
  double lhs = 0.0;        // int q rho
  double mean_term = 0.0;  // rho_bar int q
  double theta_term = 0.0; // H' theta
  double gradient_term = 0.0;  // rho_bar int |grad rho|^2 / rho^2
  double boundary_term = 0.0;  // rho_bar int Pi(N,N) ds
  double laplace_term = 0.0;   // - int Lap rho
  double rhs = 0.0;
  double residual = 0.0;
  double theta = 0.0;          // |Sigma| - rho_bar int 1/rho
};

Lemma33Report lemma33_audit(const FoliationState& state, const Ambient& ambient, const HemisphereGrid& grid);

/// |Sigma| - mean(rho) int 1/rho over a leaf, for any positive field.
double theta_of(const SurfaceGeometry& geometry, const std::vector<double>& rho);

struct MonotonicityRow {
  double t = 0.0;
  double mean_curvature = 0.0;
  double mass = 0.0;
  double theta = 0.0;
  double boundary_term = 0.0;   // 2 rho_bar int H^dM
  double scalar_term = 0.0;     // rho_bar int (R - Lambda)
  double theta_term = 0.0;      // 2 H' theta
  double umbilic_term = 0.0;    // rho_bar int (|A|^2 - H^2/2)
  double gradient_term = 0.0;   // 2 rho_bar int |grad rho|^2 / rho^2
  double formula = 0.0;         // -c H [sum of the terms]
  double formula_unit_gradient = 0.0;  // same with gradient coefficient 1
  double fd = 0.0;              // five-point derivative of the mass sequence (NaN at the ends)
  bool sign_ok = true;          // formula >= 0 for t >= 0, <= 0 for t <= 0
};

struct MonotonicityReport {
  std::vector<MonotonicityRow> rows;
  double max_fd_gap = 0.0;
  bool sign_pattern = true;
  bool hypotheses_hold = true;  // sampled R >= Lambda and H^dM >= 0 on the leaves
};

/// Requires lapse_of_foliation to have run.
MonotonicityReport monotonicity_audit(const Foliation& foliation);

struct RigidityReport {
  double a = 0.0;               // sqrt(|Sigma_0| / 2 pi)
  std::vector<double> t, u_hat, u_profile;
  double max_deviation = 0.0;
  double max_ode_residual = 0.0;  // five-point u'' vs the profile ODE
};

/// a exp(-1/2 int_0^t H) from the leaf mean curvatures (fourth-order
/// cumulative quadrature); compared with the profile of a model ambient.
RigidityReport rigidity_reconstruct(const Foliation& foliation);

/// Columns t, H, mass, min_rho, max_rho, theta and the monotonicity terms.
void write_foliation_csv(const Foliation& foliation, const MonotonicityReport& mono, std::ostream& out);

}  // namespace hawking
