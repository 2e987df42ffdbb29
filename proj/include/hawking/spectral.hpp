#pragma once

#include <Eigen/SparseCore>
#include <vector>

#include "hawking/ambient.hpp"
#include "hawking/surface.hpp"

namespace hawking {

/// Finite-volume discretization of -L = -(Delta + Ric(N,N) + |A|^2) with the
/// Robin condition d_nu f = Pi(N,N) f, in weak form:
///   Q(f, f) = f^T K f,   K = S - diag(m q) - diag(l Pi),
/// S the symmetric stiffness matrix, m the control-volume areas and l the
/// boundary arc lengths. Requires a diagonal induced metric (slices and
/// axisymmetric graphs).
struct JacobiOperator {
  HemisphereGrid grid;
  std::vector<double> potential;    // q per node
  std::vector<double> robin;        // Pi(N,N) per equator node
  std::vector<double> masses;       // control-volume areas
  std::vector<double> arc_lengths;  // boundary arc length per equator node
  Eigen::SparseMatrix<double> stiffness;

  Eigen::SparseMatrix<double> form() const;

  /// Pointwise (L f)_i = -(K f)_i / m_i.
  std::vector<double> apply(const std::vector<double>& f) const;
  /// Discrete Laplace-Beltrami with the Neumann condition: -(S f)_i / m_i.
  std::vector<double> laplacian(const std::vector<double>& f) const;
  /// Q(f, g) = f^T K g.
  double bilinear(const std::vector<double>& f, const std::vector<double>& g) const;
  /// sum_i m_i f_i g_i.
  double inner(const std::vector<double>& f, const std::vector<double>& g) const;
  double integrate(const std::vector<double>& f) const;

  void set_robin_zero();
  /// max |K - K^T| / max |K|.
  double asymmetry() const;
};

JacobiOperator assemble_jacobi(const GraphSurface& surface, const SurfaceGeometry& geometry);

struct SpectrumResult {
  double lambda1 = 0.0;
  std::vector<double> phi1;   // int phi1^2 = 1, positive mean
  double residual = 0.0;      // || L phi + lambda phi || in the quadrature norm
  double boundary_residual = 0.0;  // max |d_nu phi - Pi phi| on the equator
  int iterations = 0;
  double shift = 0.0;
};

/// Shifted inverse iteration from the all-ones vector. Throws
/// ConvergenceError (estimate = last eigenvalue estimate) after max_iter.
SpectrumResult lowest_eigenpair(const JacobiOperator& op, double tol = 1e-11, int max_iter = 500);

/// Lowest `count` eigenvalues by a dense solve (coarse grids only).
std::vector<double> dense_spectrum(const JacobiOperator& op, int count);

struct Prop31Report {
  double a = 0.0;
  double area = 0.0;
  double lambda1 = 0.0;
  double identity_residual = 0.0;      // |Sigma| (1 + lambda1) - 2 pi
  double umbilic_residual = 0.0;       // max |A|^2
  double scalar_residual = 0.0;        // max |R - 2|
  double ricci_residual = 0.0;         // max |Ric(N,N) + lambda1|
  double gauss_residual = 0.0;         // max |K - 2 pi / |Sigma||
  double geodesic_residual = 0.0;      // max |k_g|
  double boundary_mean_residual = 0.0; // max |H^dM|
};

/// Rigidity identities at the minimal slice of a warped model.
Prop31Report prop31_audit(const Ambient& ambient, const HemisphereGrid& grid);

}  // namespace hawking
