#include "hawking/cmc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>

#include "hawking/errors.hpp"
#include "hawking/mass.hpp"
#include "hawking/spectral.hpp"
#include "hawking/variation.hpp"

namespace hawking {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> mean_curvatures(const Ambient& amb, const HemisphereGrid& grid, const std::vector<double>& w) {
  return compute_geometry(GraphSurface(amb, grid, w)).mean_curvature();
}

// Residual of the leaf equations: H_i - Hbar (n rows) and, when bordered,
// the constraint row.
struct LeafSystem {
  const Ambient& amb;
  const HemisphereGrid& grid;
  const FoliationBase* base;  // null for the minimal-leaf problem
  double t;

  int size() const { return static_cast<int>(grid.size()) + (base ? 1 : 0); }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
    const std::size_t n = grid.size();
    std::vector<double> w(x.data(), x.data() + n);
    const std::vector<double> h = mean_curvatures(amb, grid, w);
    Eigen::VectorXd r(size());
    const double hbar = base ? x[static_cast<Eigen::Index>(n)] : 0.0;
    for (std::size_t i = 0; i < n; ++i) r[static_cast<Eigen::Index>(i)] = h[i] - hbar;
    if (base) {
      double c = 0.0;
      for (std::size_t i = 0; i < n; ++i) c += base->weights[i] * (w[i] - base->w0[i] - t);
      r[static_cast<Eigen::Index>(n)] = c / base->area0;
    }
    return r;
  }

  // Columns of dH/dw by three-colour centered differences (H_i depends on
  // w_{i-1}, w_i, w_{i+1} only), plus the border.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x, double step) const {
    const int n = static_cast<int>(grid.size());
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(size(), size());
    std::vector<double> w(x.data(), x.data() + n);
    for (int color = 0; color < 3; ++color) {
      std::vector<double> wp(w), wm(w);
      for (int j = color; j < n; j += 3) {
        wp[j] += step;
        wm[j] -= step;
      }
      const std::vector<double> hp = mean_curvatures(amb, grid, wp);
      const std::vector<double> hm = mean_curvatures(amb, grid, wm);
      for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - 1); j <= std::min(n - 1, i + 1); ++j)
          if (j % 3 == color) jac(i, j) = (hp[i] - hm[i]) / (2.0 * step);
    }
    if (base) {
      for (int i = 0; i < n; ++i) {
        jac(i, n) = -1.0;
        jac(n, i) = base->weights[i] / base->area0;
      }
    }
    return jac;
  }
};

CMCSolveReport newton(const LeafSystem& sys, Eigen::VectorXd& x, const CmcOptions& opt) {
  CMCSolveReport rep;
  Eigen::VectorXd r = sys.residual(x);
  double rn = r.cwiseAbs().maxCoeff();
  rep.residuals.push_back(rn);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  bool factored = false;
  while (rn > opt.tol && rep.iterations < opt.max_iter) {
    lu.compute(sys.jacobian(x, opt.fd_step));
    factored = true;
    const double rc = lu.rcond();
    rep.condition_estimate = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!(rc > 1e-14)) throw GeometryError("solve_cmc_leaf: singular Jacobian (stability threshold)");
    const Eigen::VectorXd dx = lu.solve(-r);
    double scale = 1.0;
    Eigen::VectorXd xn, rnew;
    double rnn = 0.0;
    for (int halving = 0;; ++halving) {
      xn = x + scale * dx;
      bool ok = true;
      try {
        rnew = sys.residual(xn);
        rnn = rnew.cwiseAbs().maxCoeff();
      } catch (const std::exception&) {
        ok = false;
      }
      if (ok && std::isfinite(rnn) && rnn < rn) break;
      if (halving >= opt.max_halvings) {
        if (ok && rn < 1e-10) {
          // Roundoff floor reached.
          rep.converged = true;
          return rep;
        }
        throw ConvergenceError("solve_cmc_leaf: no decrease after step halving", rn);
      }
      scale *= 0.5;
    }
    ++rep.iterations;
    if (rn < 1e-2 && rnn > 1e-9) rep.quadratic_constant = std::max(rep.quadratic_constant, rnn / (rn * rn));
    x = xn;
    r = rnew;
    const double prev = rn;
    rn = rnn;
    rep.residuals.push_back(rn);
    if (rn <= opt.tol) break;
    if (rn < 1e-10 && rn > 0.25 * prev) break;  // stagnation at the roundoff floor
  }
  if (!factored) {
    lu.compute(sys.jacobian(x, opt.fd_step));
    const double rc = lu.rcond();
    rep.condition_estimate = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  }
  rep.converged = rn <= opt.tol || rn < 1e-10;
  if (!rep.converged) throw ConvergenceError("solve_cmc_leaf: iteration limit", rn);
  return rep;
}

FoliationState make_state(const FoliationBase& base, double t, std::vector<double> w, double lambda) {
  const SurfaceGeometry geo = compute_geometry(GraphSurface(base.ambient, base.grid, w));
  FoliationState st;
  st.t = t;
  const std::vector<double> h = geo.mean_curvature();
  st.mean_curvature = geo.integrate(h) / geo.area;
  st.mass = modified_hawking_mass(geo, lambda);
  st.area = geo.area;
  st.mu.resize(w.size());
  double c = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    st.mu[i] = w[i] - base.w0[i];
    c += base.weights[i] * (st.mu[i] - t);
  }
  st.constraint_residual = c;
  st.w = std::move(w);
  return st;
}

}  // namespace

FoliationBase make_base(const Ambient& ambient, const HemisphereGrid& grid, std::vector<double> w0) {
  if (!grid.axisym()) throw PreconditionError("foliation: axisymmetric grids only");
  const SurfaceGeometry geo = compute_geometry(GraphSurface(ambient, grid, w0));
  FoliationBase base{ambient, grid, std::move(w0), {}, geo.area};
  base.weights.resize(grid.size());
  for (int i = 0; i < grid.n_theta(); ++i) {
    base.weights[i] = grid.theta_weights()[i] * grid.h_phi() * geo.nodes[i].area_density;
  }
  return base;
}

LeafSolution solve_cmc_leaf(const FoliationBase& base, double t, std::vector<double> w_init,
                            const CmcOptions& options, double lambda) {
  const std::size_t n = base.grid.size();
  Eigen::VectorXd x(static_cast<Eigen::Index>(n + 1));
  const SurfaceGeometry g0 = compute_geometry(GraphSurface(base.ambient, base.grid, w_init));
  for (std::size_t i = 0; i < n; ++i) x[static_cast<Eigen::Index>(i)] = w_init[i];
  x[static_cast<Eigen::Index>(n)] = g0.integrate(g0.mean_curvature()) / g0.area;
  const LeafSystem sys{base.ambient, base.grid, &base, t};
  LeafSolution out;
  out.report = newton(sys, x, options);
  out.state = make_state(base, t, std::vector<double>(x.data(), x.data() + n), lambda);
  out.state.mean_curvature = x[static_cast<Eigen::Index>(n)];
  return out;
}

LeafSolution solve_minimal_leaf(const Ambient& ambient, const HemisphereGrid& grid, std::vector<double> w_init,
                                const CmcOptions& options, double lambda) {
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(w_init.data(), static_cast<Eigen::Index>(w_init.size()));
  const LeafSystem sys{ambient, grid, nullptr, 0.0};
  LeafSolution out;
  out.report = newton(sys, x, options);
  std::vector<double> w(x.data(), x.data() + x.size());
  const FoliationBase base = make_base(ambient, grid, w);
  out.state = make_state(base, 0.0, std::move(w), lambda);
  return out;
}

Foliation foliate(const Ambient& ambient, const HemisphereGrid& grid, double s0, double t_min, double t_max,
                  double dt, const CmcOptions& options, double lambda) {
  if (!(dt > 0.0) || t_min > 0.0 || t_max < 0.0) throw PreconditionError("foliate: invalid window");
  const LeafSolution minimal = solve_minimal_leaf(ambient, grid, std::vector<double>(grid.size(), s0), options, lambda);
  Foliation fol{make_base(ambient, grid, minimal.state.w), dt, lambda, {}, {}, minimal.report, false, 0.0, 0.0};
  FoliationState zero = make_state(fol.base, 0.0, minimal.state.w, lambda);

  // March in one direction; returns leaves in marching order.
  auto march = [&](int dir, double limit, std::vector<FoliationState>& leaves, std::vector<CMCSolveReport>& reps) {
    const int steps = static_cast<int>(std::floor(limit / dt + 1e-9));
    std::vector<double> prev = zero.w, prev2;
    for (int k = 1; k <= steps; ++k) {
      const double t = dir * k * dt;
      std::vector<double> guess(prev);
      for (std::size_t i = 0; i < guess.size(); ++i) {
        guess[i] += prev2.empty() ? dir * dt : prev[i] - prev2[i];
      }
      LeafSolution sol;
      bool ok = false;
      try {
        sol = solve_cmc_leaf(fol.base, t, guess, options, lambda);
        ok = true;
      } catch (const std::exception&) {
      }
      for (int split = 2; !ok && split <= 8; split *= 2) {
        try {
          std::vector<double> w = prev;
          for (int sub = 1; sub <= split; ++sub) {
            const double ts = dir * ((k - 1) * dt + sub * dt / split);
            for (double& v : w) v += dir * dt / split;
            sol = solve_cmc_leaf(fol.base, ts, w, options, lambda);
            w = sol.state.w;
          }
          ok = true;
        } catch (const std::exception&) {
        }
      }
      if (!ok) {
        fol.halted = true;
        return;
      }
      prev2 = prev;
      prev = sol.state.w;
      leaves.push_back(std::move(sol.state));
      reps.push_back(std::move(sol.report));
    }
  };
  std::vector<FoliationState> up, down;
  std::vector<CMCSolveReport> rup, rdown;
  march(+1, t_max, up, rup);
  march(-1, -t_min, down, rdown);

  for (std::size_t k = down.size(); k-- > 0;) {
    fol.leaves.push_back(std::move(down[k]));
    fol.reports.push_back(std::move(rdown[k]));
  }
  fol.leaves.push_back(std::move(zero));
  fol.reports.push_back(minimal.report);
  for (std::size_t k = 0; k < up.size(); ++k) {
    fol.leaves.push_back(std::move(up[k]));
    fol.reports.push_back(std::move(rup[k]));
  }
  fol.t_min = fol.leaves.front().t;
  fol.t_max = fol.leaves.back().t;
  return fol;
}

std::size_t base_leaf_index(const Foliation& foliation) {
  for (std::size_t k = 0; k < foliation.leaves.size(); ++k)
    if (foliation.leaves[k].t == 0.0) return k;
  throw PreconditionError("foliation has no t = 0 leaf");
}

namespace {

// Fourth-order first derivative of a uniformly sampled sequence at index k.
template <class Get>
double five_point(Get f, std::size_t k, std::size_t n, double dt) {
  if (n < 5) throw PreconditionError("five_point: need at least five samples");
  if (k >= 2 && k + 2 < n) return (f(k - 2) - 8.0 * f(k - 1) + 8.0 * f(k + 1) - f(k + 2)) / (12.0 * dt);
  if (k == 0) return (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) / (12.0 * dt);
  if (k == 1) return (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) / (12.0 * dt);
  if (k == n - 2) {
    return -(-3.0 * f(n - 1) - 10.0 * f(n - 2) + 18.0 * f(n - 3) - 6.0 * f(n - 4) + f(n - 5)) / (12.0 * dt);
  }
  return -(-25.0 * f(n - 1) + 48.0 * f(n - 2) - 36.0 * f(n - 3) + 16.0 * f(n - 4) - 3.0 * f(n - 5)) / (12.0 * dt);
}

// Signed distance along the normal geodesic from node i of `from` to the
// leaf `to`.
double normal_distance(const Ambient& amb, const HemisphereGrid& grid, const NodeGeometry& nd,
                       const std::vector<double>& to, int i) {
  auto miss = [&](double tau) {
    const auto [s, th] = geodesic_endpoint(amb, nd.w, nd.theta, tau * nd.normal[0], tau * nd.normal[1], 6);
    return s - interpolate_theta(grid, to, std::clamp(th, 0.0, kPi / 2));
  };
  double t0 = 0.0, f0 = nd.w - to[static_cast<std::size_t>(i)];
  double t1 = -f0 * nd.normal[0], f1 = miss(t1);
  for (int it = 0; it < 40 && std::abs(f1) > 1e-15 && f1 != f0; ++it) {
    const double t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
    t0 = t1;
    f0 = f1;
    t1 = t2;
    f1 = miss(t1);
  }
  return t1;
}

double grad_ratio_integral(const SurfaceGeometry& geo, const HemisphereGrid& grid, const std::vector<double>& rho) {
  const FieldDerivatives d = field_derivatives(grid, rho);
  std::vector<double> f(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const Mat2& gi = geo.nodes[k].metric_inv;
    const double g2 = gi[0][0] * d.t[k] * d.t[k] + 2.0 * gi[0][1] * d.t[k] * d.p[k] + gi[1][1] * d.p[k] * d.p[k];
    f[k] = g2 / (rho[k] * rho[k]);
  }
  return geo.integrate(f);
}

}  // namespace

double theta_of(const SurfaceGeometry& geometry, const std::vector<double>& rho) {
  std::vector<double> inv(rho.size());
  for (std::size_t k = 0; k < rho.size(); ++k) {
    if (!(rho[k] > 0.0)) throw PreconditionError("theta_of: lapse must be positive");
    inv[k] = 1.0 / rho[k];
  }
  const double rho_bar = geometry.integrate(rho) / geometry.area;
  return geometry.area - rho_bar * geometry.integrate(inv);
}

LapseReport lapse_of_foliation(Foliation& fol) {
  auto& leaves = fol.leaves;
  const std::size_t nl = leaves.size();
  if (nl < 5) throw PreconditionError("lapse_of_foliation: need at least five leaves");
  const HemisphereGrid& grid = fol.base.grid;
  const Ambient& amb = fol.base.ambient;
  const std::size_t n = grid.size();
  LapseReport rep;

  for (std::size_t k = 0; k < nl; ++k) {
    const SurfaceGeometry geo = compute_geometry(GraphSurface(amb, grid, leaves[k].w));
    FoliationState& st = leaves[k];
    st.rho.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double wt = five_point([&](std::size_t j) { return leaves[j].w[i]; }, k, nl, fol.dt);
      st.rho[i] = wt * geo.nodes[i].normal[0];
    }
    st.rho_bar = geo.integrate(st.rho) / geo.area;
    st.h_prime = five_point([&](std::size_t j) { return leaves[j].mean_curvature; }, k, nl, fol.dt);

    rep.t.push_back(st.t);
    rep.min_rho.push_back(*std::min_element(st.rho.begin(), st.rho.end()));
    rep.max_rho.push_back(*std::max_element(st.rho.begin(), st.rho.end()));

    // Jacobi equation H' = L rho.
    const GraphSurface surf(amb, grid, st.w);
    const JacobiOperator op = assemble_jacobi(surf, geo);
    const std::vector<double> lr = op.apply(st.rho);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += op.masses[i] * std::pow(lr[i] - st.h_prime, 2);
      den += op.masses[i];
    }
    const bool interior = k >= 2 && k + 2 < nl;
    rep.jacobi_residual.push_back(interior ? std::sqrt(num / den) : kNaN);
    if (interior) rep.max_jacobi_residual = std::max(rep.max_jacobi_residual, rep.jacobi_residual.back());

    // Second route: normal geodesic distances to the neighbouring leaves.
    double gap = kNaN;
    if (interior) {
      gap = 0.0;
      for (int i = 0; i < grid.n_theta(); ++i) {
        double d[5];
        for (int j = -2; j <= 2; ++j) {
          d[j + 2] = j == 0 ? 0.0 : normal_distance(amb, grid, geo.nodes[i], leaves[k + j].w, i);
        }
        const double rho2 = (d[0] - 8.0 * d[1] + 8.0 * d[3] - d[4]) / (12.0 * fol.dt);
        gap = std::max(gap, std::abs(rho2 - st.rho[static_cast<std::size_t>(i)]));
      }
      rep.max_route_gap = std::max(rep.max_route_gap, gap);
    }
    rep.route_gap.push_back(gap);
  }
  return rep;
}

Lemma33Report lemma33_audit(const FoliationState& st, const Ambient& ambient, const HemisphereGrid& grid) {
  if (st.rho.size() != grid.size()) throw PreconditionError("lemma33_audit: lapse not computed");
  const GraphSurface surf(ambient, grid, st.w);
  const SurfaceGeometry geo = compute_geometry(surf);
  const JacobiOperator op = assemble_jacobi(surf, geo);
  const std::size_t n = grid.size();
  std::vector<double> q(n), q_rho(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = geo.nodes[i].ric_nn + geo.nodes[i].norm_a2;
    q_rho[i] = q[i] * st.rho[i];
  }
  const double rho_bar = geo.integrate(st.rho) / geo.area;
  Lemma33Report r;
  r.t = st.t;
  r.theta = theta_of(geo, st.rho);
  r.lhs = geo.integrate(q_rho);
  r.mean_term = rho_bar * geo.integrate(q);
  r.theta_term = st.h_prime * r.theta;
  r.gradient_term = rho_bar * grad_ratio_integral(geo, grid, st.rho);
  std::vector<double> pi(geo.boundary.size());
  for (std::size_t j = 0; j < pi.size(); ++j) pi[j] = geo.boundary[j].pi_nn;
  r.boundary_term = rho_bar * geo.boundary_integrate(pi);
  r.laplace_term = -op.integrate(op.laplacian(st.rho));
  r.rhs = r.mean_term + r.theta_term + r.gradient_term + r.boundary_term + r.laplace_term;
  r.residual = r.lhs - r.rhs;
  return r;
}

MonotonicityReport monotonicity_audit(const Foliation& fol) {
  const auto& leaves = fol.leaves;
  const std::size_t nl = leaves.size();
  const HemisphereGrid& grid = fol.base.grid;
  const Ambient& amb = fol.base.ambient;
  MonotonicityReport rep;
  for (std::size_t k = 0; k < nl; ++k) {
    const FoliationState& st = leaves[k];
    if (st.rho.size() != grid.size()) throw PreconditionError("monotonicity_audit: lapse not computed");
    const SurfaceGeometry geo = compute_geometry(GraphSurface(amb, grid, st.w));
    const std::size_t n = grid.size();
    std::vector<double> r_minus(n), umb(n);
    double min_r = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const NodeGeometry& nd = geo.nodes[i];
      r_minus[i] = nd.scal - fol.lambda;
      umb[i] = nd.norm_a2 - 0.5 * nd.mean_curvature * nd.mean_curvature;
      min_r = std::min(min_r, nd.scal);
    }
    std::vector<double> hdm(geo.boundary.size());
    double min_hdm = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < hdm.size(); ++j) {
      hdm[j] = geo.boundary[j].boundary_mean_curvature;
      min_hdm = std::min(min_hdm, hdm[j]);
    }
    if (min_r < fol.lambda - 1e-9 || min_hdm < -1e-12) rep.hypotheses_hold = false;

    MonotonicityRow row;
    row.t = st.t;
    row.mean_curvature = st.mean_curvature;
    row.mass = st.mass;
    row.boundary_term = 2.0 * st.rho_bar * geo.boundary_integrate(hdm);
    row.scalar_term = st.rho_bar * geo.integrate(r_minus);
    row.theta = theta_of(geo, st.rho);
    row.theta_term = 2.0 * st.h_prime * row.theta;
    row.umbilic_term = st.rho_bar * geo.integrate(umb);
    row.gradient_term = 2.0 * st.rho_bar * grad_ratio_integral(geo, grid, st.rho);
    const double c = std::sqrt(geo.area) / std::pow(8.0 * kPi, 1.5);
    const double base_sum = row.boundary_term + row.scalar_term + row.theta_term + row.umbilic_term;
    row.formula = -c * st.mean_curvature * (base_sum + row.gradient_term);
    row.formula_unit_gradient = -c * st.mean_curvature * (base_sum + 0.5 * row.gradient_term);
    const bool interior = k >= 2 && k + 2 < nl;
    row.fd = interior ? five_point([&](std::size_t j) { return leaves[j].mass; }, k, nl, fol.dt) : kNaN;
    if (interior) rep.max_fd_gap = std::max(rep.max_fd_gap, std::abs(row.fd - row.formula));
    const double slack = 1e-12;
    row.sign_ok = (st.t >= 0.0 ? row.formula >= -slack : true) && (st.t <= 0.0 ? row.formula <= slack : true);
    rep.sign_pattern = rep.sign_pattern && row.sign_ok;
    rep.rows.push_back(row);
  }
  return rep;
}

RigidityReport rigidity_reconstruct(const Foliation& fol) {
  const auto& leaves = fol.leaves;
  const std::size_t nl = leaves.size();
  if (nl < 5) throw PreconditionError("rigidity_reconstruct: need at least five leaves");
  const std::size_t k0 = base_leaf_index(fol);
  const double dt = fol.dt;
  auto h = [&](std::size_t k) { return leaves[k].mean_curvature; };
  // Integral of H over [t_k, t_{k+1}] from the cubic through four samples.
  auto panel = [&](std::size_t k) {
    if (k >= 1 && k + 2 < nl) return dt / 24.0 * (-h(k - 1) + 13.0 * h(k) + 13.0 * h(k + 1) - h(k + 2));
    if (k == 0) return dt / 24.0 * (9.0 * h(0) + 19.0 * h(1) - 5.0 * h(2) + h(3));
    return dt / 24.0 * (9.0 * h(k + 1) + 19.0 * h(k) - 5.0 * h(k - 1) + h(k - 2));
  };
  std::vector<double> integral(nl, 0.0);
  for (std::size_t k = k0; k + 1 < nl; ++k) integral[k + 1] = integral[k] + panel(k);
  for (std::size_t k = k0; k-- > 0;) integral[k] = integral[k + 1] - panel(k);

  RigidityReport rep;
  rep.a = std::sqrt(leaves[k0].area / (2.0 * kPi));
  const Profile* prof = fol.base.ambient.profile();
  for (std::size_t k = 0; k < nl; ++k) {
    rep.t.push_back(leaves[k].t);
    rep.u_hat.push_back(rep.a * std::exp(-0.5 * integral[k]));
    if (prof) {
      rep.u_profile.push_back(prof->at(fol.base.w0[0] + leaves[k].t).u);
      rep.max_deviation = std::max(rep.max_deviation, std::abs(rep.u_hat.back() - rep.u_profile.back()));
    }
  }
  if (!prof) rep.max_deviation = kNaN;
  const auto& u = rep.u_hat;
  for (std::size_t k = 2; k + 2 < nl; ++k) {
    const double up = (u[k - 2] - 8.0 * u[k - 1] + 8.0 * u[k + 1] - u[k + 2]) / (12.0 * dt);
    const double upp = (-u[k - 2] + 16.0 * u[k - 1] - 30.0 * u[k] + 16.0 * u[k + 1] - u[k + 2]) / (12.0 * dt * dt);
    rep.max_ode_residual = std::max(rep.max_ode_residual, std::abs(upp - profile_rhs(u[k], up)));
  }
  return rep;
}

void write_foliation_csv(const Foliation& fol, const MonotonicityReport& mono, std::ostream& out) {
  out << "t,H,mass,min_rho,max_rho,theta,boundary_term,scalar_term,theta_term,umbilic_term,gradient_term,"
         "dm_formula,dm_fd\n"
      << std::setprecision(17);
  for (std::size_t k = 0; k < fol.leaves.size(); ++k) {
    const FoliationState& st = fol.leaves[k];
    const auto [lo, hi] = std::minmax_element(st.rho.begin(), st.rho.end());
    const bool have = !st.rho.empty();
    const MonotonicityRow* row = k < mono.rows.size() ? &mono.rows[k] : nullptr;
    out << st.t << ',' << st.mean_curvature << ',' << st.mass << ',' << (have ? *lo : kNaN) << ','
        << (have ? *hi : kNaN) << ',' << (row ? row->theta : kNaN)
        << ',' << (row ? row->boundary_term : kNaN) << ',' << (row ? row->scalar_term : kNaN) << ','
        << (row ? row->theta_term : kNaN) << ',' << (row ? row->umbilic_term : kNaN) << ','
        << (row ? row->gradient_term : kNaN) << ',' << (row ? row->formula : kNaN) << ','
        << (row ? row->fd : kNaN) << '\n';
  }
}

}  // namespace hawking
