#include "hawking/spectral.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>

#include "hawking/errors.hpp"

namespace hawking {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd to_eigen(const std::vector<double>& f) {
  return Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

JacobiOperator assemble_jacobi(const GraphSurface& surface, const SurfaceGeometry& geometry) {
  if (!surface.admissible) throw PreconditionError("assemble_jacobi: inadmissible surface");
  const HemisphereGrid& grid = surface.grid;
  const int nt = grid.n_theta();
  const int np = grid.n_phi();
  const double h = grid.h();
  const double hp = grid.h_phi();

  double scale = 0.0;
  for (const auto& nd : geometry.nodes) {
    scale = std::max(scale, nd.metric[0][0] + nd.metric[1][1]);
    if (std::abs(nd.metric[0][1]) > 1e-12 * (nd.metric[0][0] + nd.metric[1][1])) {
      throw GeometryError("assemble_jacobi: induced metric is not diagonal in the chart");
    }
  }

  JacobiOperator op{grid, {}, {}, {}, {}, {}};
  op.potential.resize(grid.size());
  op.masses.resize(grid.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(grid.size() * 5);
  auto couple = [&](std::size_t a, std::size_t b, double c) {
    trip.emplace_back(a, a, c);
    trip.emplace_back(b, b, c);
    trip.emplace_back(a, b, -c);
    trip.emplace_back(b, a, -c);
  };

  for (int i = 0; i < nt; ++i) {
    const double cell_h = (i == nt - 1) ? 0.5 * h : h;
    for (int j = 0; j < np; ++j) {
      const std::size_t k = grid.index(i, j);
      const NodeGeometry& nd = geometry.nodes[k];
      op.potential[k] = nd.ric_nn + nd.norm_a2;
      op.masses[k] = nd.area_density * cell_h * hp;
      if (np > 1) {
        // phi-edge to the next longitude, coefficient J / G.
        const double c = std::sqrt(nd.metric[0][0] / nd.metric[1][1]) * cell_h / hp;
        couple(k, grid.index(i, (j + 1) % np), c);
      }
      if (i + 1 < nt) {
        const std::size_t kn = grid.index(i + 1, j);
        const double wm = 0.5 * (surface.w[k] + surface.w[kn]);
        const double wt = (surface.w[kn] - surface.w[k]) / h;
        const double tm = (i + 1) * h;
        const Vec3 g = surface.ambient.metric_at(wm, tm);
        const double e = g[1] + wt * wt;
        const double c = std::sqrt(g[2] / e) * hp / h;
        couple(k, kn, c);
      }
    }
  }
  op.stiffness.resize(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(grid.size()));
  op.stiffness.setFromTriplets(trip.begin(), trip.end());

  for (const auto& b : geometry.boundary) {
    op.robin.push_back(b.pi_nn);
    op.arc_lengths.push_back(b.line_density * hp);
  }
  return op;
}

Eigen::SparseMatrix<double> JacobiOperator::form() const {
  Eigen::SparseMatrix<double> k = stiffness;
  std::vector<double> diag(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) diag[i] = -masses[i] * potential[i];
  for (int j = 0; j < grid.n_phi(); ++j) diag[grid.index(grid.equator(), j)] -= arc_lengths[j] * robin[j];
  for (std::size_t i = 0; i < diag.size(); ++i) k.coeffRef(i, i) += diag[i];
  k.makeCompressed();
  return k;
}

std::vector<double> JacobiOperator::apply(const std::vector<double>& f) const {
  const Eigen::VectorXd kf = form() * to_eigen(f);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = -kf[i] / masses[i];
  return out;
}

std::vector<double> JacobiOperator::laplacian(const std::vector<double>& f) const {
  const Eigen::VectorXd sf = stiffness * to_eigen(f);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = -sf[i] / masses[i];
  return out;
}

double JacobiOperator::bilinear(const std::vector<double>& f, const std::vector<double>& g) const {
  return to_eigen(f).dot(form() * to_eigen(g));
}

double JacobiOperator::inner(const std::vector<double>& f, const std::vector<double>& g) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += masses[i] * f[i] * g[i];
  return acc;
}

double JacobiOperator::integrate(const std::vector<double>& f) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += masses[i] * f[i];
  return acc;
}

void JacobiOperator::set_robin_zero() { std::fill(robin.begin(), robin.end(), 0.0); }

double JacobiOperator::asymmetry() const {
  const Eigen::SparseMatrix<double> k = form();
  const Eigen::SparseMatrix<double> kt = k.transpose();
  const Eigen::SparseMatrix<double> diff = k - kt;
  double num = 0.0, den = 0.0;
  for (int c = 0; c < diff.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(diff, c); it; ++it) num = std::max(num, std::abs(it.value()));
  for (int c = 0; c < k.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(k, c); it; ++it) den = std::max(den, std::abs(it.value()));
  return den > 0.0 ? num / den : 0.0;
}

SpectrumResult lowest_eigenpair(const JacobiOperator& op, double tol, int max_iter) {
  const Eigen::SparseMatrix<double> k = op.form();
  const Eigen::Index n = k.rows();
  const Eigen::VectorXd m = to_eigen(op.masses);

  // Gershgorin bound for K x = lambda M x, lowered by one to stay regular.
  double bound = std::numeric_limits<double>::infinity();
  for (int c = 0; c < k.outerSize(); ++c) {
    double diag = 0.0, off = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(k, c); it; ++it) {
      if (it.row() == it.col()) diag = it.value();
      else off += std::abs(it.value());
    }
    bound = std::min(bound, (diag - off) / m[c]);
  }
  const double shift = bound - 1.0;

  Eigen::SparseMatrix<double> shifted = k;
  for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= shift * m[i];
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(shifted);
  if (solver.info() != Eigen::Success) throw ConvergenceError("lowest_eigenpair: factorization failed", bound);

  auto m_norm = [&](const Eigen::VectorXd& v) { return std::sqrt(v.dot(m.cwiseProduct(v))); };
  Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
  x /= m_norm(x);
  double lambda = x.dot(k * x);
  double residual = 0.0;
  SpectrumResult out;
  out.shift = shift;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd y = solver.solve(m.cwiseProduct(x));
    y /= m_norm(y);
    x = y;
    const Eigen::VectorXd kx = k * x;
    lambda = x.dot(kx);
    residual = std::sqrt((kx - lambda * m.cwiseProduct(x)).cwiseAbs2().cwiseQuotient(m).sum());
    out.iterations = it;
    if (residual <= tol * std::max(1.0, std::abs(lambda))) break;
    if (it == max_iter) throw ConvergenceError("lowest_eigenpair: no convergence (near-degenerate spectrum?)", lambda);
  }

  const double mean = x.dot(m);
  double sign = 1.0;
  if (std::abs(mean) > 1e-12 * m.sum()) sign = mean > 0 ? 1.0 : -1.0;
  else sign = x[0] >= 0 ? 1.0 : -1.0;
  x *= sign;

  out.lambda1 = lambda;
  out.phi1 = to_std(x);
  out.residual = residual;

  const std::vector<double> dphi = equator_theta_derivative(op.grid, out.phi1);
  for (int j = 0; j < op.grid.n_phi(); ++j) {
    const double phi = out.phi1[op.grid.index(op.grid.equator(), j)];
    // Equator conormal derivative: d_theta / sqrt(gamma_thth); the arc
    // length is sqrt(gamma_phph) h_phi, the area element sqrt(E G).
    const double cell = op.masses[op.grid.index(op.grid.equator(), j)] / (0.5 * op.grid.h() * op.grid.h_phi());
    const double g_pp = std::pow(op.arc_lengths[j] / op.grid.h_phi(), 2);
    const double sqrt_e = cell / std::sqrt(g_pp);
    out.boundary_residual = std::max(out.boundary_residual, std::abs(dphi[j] / sqrt_e - op.robin[j] * phi));
  }
  return out;
}

std::vector<double> dense_spectrum(const JacobiOperator& op, int count) {
  const Eigen::MatrixXd k(op.form());
  const Eigen::VectorXd s = to_eigen(op.masses).cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd a = s.asDiagonal() * k * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (int i = 0; i < std::min<int>(count, static_cast<int>(es.eigenvalues().size())); ++i) {
    out.push_back(es.eigenvalues()[i]);
  }
  return out;
}

Prop31Report prop31_audit(const Ambient& ambient, const HemisphereGrid& grid) {
  if (ambient.kind() != Ambient::Kind::WarpedModel) throw PreconditionError("prop31_audit: requires the warped model");
  const double a = ambient.profile()->params().a;
  const GraphSurface slice = slice_surface(ambient, 0.0, grid);
  const SurfaceGeometry geo = compute_geometry(slice);
  const JacobiOperator op = assemble_jacobi(slice, geo);
  const SpectrumResult sp = lowest_eigenpair(op);

  Prop31Report r;
  r.a = a;
  r.area = geo.area;
  r.lambda1 = sp.lambda1;
  r.identity_residual = geo.area * (1.0 + sp.lambda1) - 2.0 * kPi;
  for (const auto& nd : geo.nodes) {
    r.umbilic_residual = std::max(r.umbilic_residual, nd.norm_a2);
    r.scalar_residual = std::max(r.scalar_residual, std::abs(nd.scal - 2.0));
    r.ricci_residual = std::max(r.ricci_residual, std::abs(nd.ric_nn + sp.lambda1));
    r.gauss_residual = std::max(r.gauss_residual, std::abs(nd.gauss_curvature - 2.0 * kPi / geo.area));
  }
  for (const auto& b : geo.boundary) {
    r.geodesic_residual = std::max(r.geodesic_residual, std::abs(b.geodesic_curvature));
    r.boundary_mean_residual = std::max(r.boundary_mean_residual, std::abs(b.boundary_mean_curvature));
  }
  return r;
}

}  // namespace hawking
