#include "hawking/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "hawking/errors.hpp"

namespace hawking {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

// 4th-order centered stencils.
constexpr std::array<double, 4> kOffsets{-2.0, -1.0, 1.0, 2.0};
constexpr std::array<double, 4> kD1{1.0 / 12.0, -8.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0};
constexpr std::array<double, 4> kD2Off{-1.0 / 12.0, 16.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};
constexpr double kD2Center = -30.0 / 12.0;

struct Comp2 {
  // value, d_s, d_theta, d_ss, d_stheta, d_thetatheta
  double v = 0, s = 0, t = 0, ss = 0, st = 0, tt = 0;
};

// Metric diagonal g = (1, A^2, B^2) from the 2-jets of A and B.
MetricJet jet_from_components(const Comp2& a, const Comp2& b) {
  MetricJet j;
  j.g = {1.0, a.v * a.v, b.v * b.v};
  auto fill = [&](const Comp2& c, int k) {
    j.dg[0][k] = 2.0 * c.v * c.s;
    j.dg[1][k] = 2.0 * c.v * c.t;
    j.ddg[0][0][k] = 2.0 * (c.s * c.s + c.v * c.ss);
    j.ddg[0][1][k] = j.ddg[1][0][k] = 2.0 * (c.s * c.t + c.v * c.st);
    j.ddg[1][1][k] = 2.0 * (c.t * c.t + c.v * c.tt);
  };
  fill(a, 1);
  fill(b, 2);
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------

double PointCurvature::dot(const Vec3& x, const Vec3& y) const {
  return jet.g[0] * x[0] * y[0] + jet.g[1] * x[1] * y[1] + jet.g[2] * x[2] * y[2];
}

double PointCurvature::rm(const Vec3& x, const Vec3& y, const Vec3& z, const Vec3& w) const {
  double acc = 0.0;
  for (int a = 0; a < 3; ++a) {
    if (x[a] == 0.0) continue;
    for (int b = 0; b < 3; ++b) {
      if (y[b] == 0.0) continue;
      for (int c = 0; c < 3; ++c) {
        if (z[c] == 0.0) continue;
        for (int d = 0; d < 3; ++d) acc += riemann[a][b][c][d] * x[a] * y[b] * z[c] * w[d];
      }
    }
  }
  return acc;
}

double PointCurvature::ric(const Vec3& x, const Vec3& y) const {
  double acc = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) acc += ricci[a][b] * x[a] * y[b];
  return acc;
}

PointCurvature curvature_from_jet(const MetricJet& jet) {
  PointCurvature pc;
  pc.jet = jet;
  const auto& g = jet.g;
  for (int k = 0; k < 3; ++k) {
    if (!(g[k] > 0.0)) throw GeometryError("curvature: non-positive metric component");
  }
  // d_c g_ij for the diagonal metric (phi derivatives vanish).
  auto dgm = [&](int c, int i, int j) -> double {
    if (i != j || c == 2) return 0.0;
    return jet.dg[c][i];
  };
  auto ddgm = [&](int c, int d, int i, int j) -> double {
    if (i != j || c == 2 || d == 2) return 0.0;
    return jet.ddg[c][d][i];
  };

  auto& gam = pc.christoffel;
  std::array<std::array<Mat3, 3>, 3> dgam{};  // dgam[c][k][i][j] = d_c Gamma^k_ij
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double bracket = dgm(i, k, j) + dgm(j, k, i) - dgm(k, i, j);
        gam[k][i][j] = 0.5 * bracket / g[k];
        for (int c = 0; c < 2; ++c) {
          const double dbracket = ddgm(c, i, k, j) + ddgm(c, j, k, i) - ddgm(c, k, i, j);
          dgam[c][k][i][j] = 0.5 * dbracket / g[k] - 0.5 * bracket * dgm(c, k, k) / (g[k] * g[k]);
        }
      }
    }
  }

  // R^l_{abc}: R(d_a, d_b) d_c = R^l_{abc} d_l.
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        for (int l = 0; l < 3; ++l) {
          double r = dgam[a][l][b][c] - dgam[b][l][a][c];
          for (int m = 0; m < 3; ++m) r += gam[l][a][m] * gam[m][b][c] - gam[l][b][m] * gam[m][a][c];
          pc.riemann[a][b][c][l] = g[l] * r;
        }

  // Ric(Y,Z) = sum_a g^{aa} Rm(d_a, Y, Z, d_a).
  for (int b = 0; b < 3; ++b)
    for (int c = 0; c < 3; ++c) {
      double r = 0.0;
      for (int a = 0; a < 3; ++a) r += pc.riemann[a][b][c][a] / g[a];
      pc.ricci[b][c] = r;
    }
  pc.scalar = 0.0;
  for (int b = 0; b < 3; ++b) pc.scalar += pc.ricci[b][b] / g[b];
  return pc;
}

// ---------------------------------------------------------------------------

struct Ambient::Impl {
  Kind kind = Kind::WarpedModel;
  std::string label;
  std::shared_ptr<const Profile> profile;
  Component a, b;
  double s_min = 0.0, s_max = 0.0;
  double fd_step = 2e-3;

  // Component evaluation with the reflection ghosts used by the stencils.
  double eval_a(double s, double t) const {
    if (t > kHalfPi) t = 2.0 * kHalfPi - t;
    if (t < 0.0) t = -t;
    return a(s, t);
  }
  double eval_b(double s, double t) const {
    if (t > kHalfPi) t = 2.0 * kHalfPi - t;
    if (t < 0.0) return -b(s, -t);
    return b(s, t);
  }

  template <class F>
  Comp2 fd_jet(const F& f, double s, double t) const {
    const double h = fd_step;
    Comp2 c;
    c.v = f(s, t);
    c.ss = kD2Center * c.v;
    c.tt = kD2Center * c.v;
    for (int k = 0; k < 4; ++k) {
      const double fs = f(s + kOffsets[k] * h, t);
      const double ft = f(s, t + kOffsets[k] * h);
      c.s += kD1[k] * fs;
      c.t += kD1[k] * ft;
      c.ss += kD2Off[k] * fs;
      c.tt += kD2Off[k] * ft;
      for (int l = 0; l < 4; ++l) {
        c.st += kD1[k] * kD1[l] * f(s + kOffsets[k] * h, t + kOffsets[l] * h);
      }
    }
    c.s /= h;
    c.t /= h;
    c.ss /= h * h;
    c.tt /= h * h;
    c.st /= h * h;
    return c;
  }
};

Ambient Ambient::warped(Profile profile) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::WarpedModel;
  impl->label = "warped";
  impl->profile = std::make_shared<const Profile>(std::move(profile));
  impl->s_min = -impl->profile->s_max();
  impl->s_max = impl->profile->s_max();
  const Profile* p = impl->profile.get();
  impl->a = [p](double s, double) { return p->at(s).u; };
  impl->b = [p](double s, double t) { return p->at(s).u * std::sin(t); };
  Ambient amb;
  amb.impl_ = std::move(impl);
  return amb;
}

Ambient Ambient::axisym(Component a, Component b, double s_min, double s_max, double fd_step,
                        std::string label) {
  if (!(s_max > s_min)) throw DomainError("Ambient::axisym: empty s-range");
  if (!(fd_step > 0.0)) throw DomainError("Ambient::axisym: fd_step must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::AxisymPerturbed;
  impl->label = std::move(label);
  impl->a = std::move(a);
  impl->b = std::move(b);
  impl->s_min = s_min;
  impl->s_max = s_max;
  impl->fd_step = fd_step;
  // Reflection symmetry at the equator keeps the boundary totally geodesic.
  for (int k = 0; k <= 8; ++k) {
    const double s = s_min + (s_max - s_min) * k / 8.0;
    const double h = 1e-4;
    const double da = (impl->a(s, kHalfPi) - impl->a(s, kHalfPi - h)) / h;
    const double db = (impl->b(s, kHalfPi) - impl->b(s, kHalfPi - h)) / h;
    const double sa = std::abs(impl->a(s, kHalfPi)) + 1.0;
    if (std::abs(da) > 1e-2 * sa || std::abs(db) > 1e-2 * sa) {
      throw DomainError("Ambient::axisym: components are not reflection symmetric at theta = pi/2");
    }
    if (!(impl->a(s, kHalfPi) > 0.0) || !(impl->b(s, kHalfPi) > 0.0)) {
      throw GeometryError("Ambient::axisym: non-positive metric component");
    }
  }
  Ambient amb;
  amb.impl_ = std::move(impl);
  return amb;
}

Ambient::Kind Ambient::kind() const { return impl_->kind; }
const std::string& Ambient::label() const { return impl_->label; }
const Profile* Ambient::profile() const { return impl_->profile.get(); }
double Ambient::s_min() const { return impl_->s_min; }
double Ambient::s_max() const { return impl_->s_max; }
double Ambient::fd_step() const { return impl_->fd_step; }
double Ambient::comp_a(double s, double theta) const { return impl_->eval_a(s, theta); }
double Ambient::comp_b(double s, double theta) const { return impl_->eval_b(s, theta); }

void Ambient::check_domain(double s, double theta) const {
  const double tol = 1e-12;
  if (!(theta >= -tol && theta <= kHalfPi + tol)) {
    throw DomainError("ambient: theta outside [0, pi/2]");
  }
  if (!(s >= impl_->s_min - tol && s <= impl_->s_max + tol)) {
    throw DomainError("ambient: s = " + std::to_string(s) + " outside the ambient range");
  }
}

Vec3 Ambient::metric_at(double s, double theta, double) const {
  check_domain(s, theta);
  const double a = comp_a(s, theta), b = comp_b(s, theta);
  if (!(a > 0.0) || b < 0.0) throw GeometryError("ambient: non-positive metric component");
  return {1.0, a * a, b * b};
}

MetricJet Ambient::jet(double s, double theta) const {
  check_domain(s, theta);
  if (impl_->kind == Kind::WarpedModel) {
    const Profile::State st = impl_->profile->at(s);
    const double sn = std::sin(theta), cs = std::cos(theta);
    Comp2 a{st.u, st.up, 0.0, st.upp, 0.0, 0.0};
    Comp2 b{st.u * sn, st.up * sn, st.u * cs, st.upp * sn, st.up * cs, -st.u * sn};
    return jet_from_components(a, b);
  }
  const auto fa = [this](double x, double t) { return impl_->eval_a(x, t); };
  const auto fb = [this](double x, double t) { return impl_->eval_b(x, t); };
  return jet_from_components(impl_->fd_jet(fa, s, theta), impl_->fd_jet(fb, s, theta));
}

PointCurvature Ambient::point_curvature(double s, double theta) const {
  return curvature_from_jet(jet(s, theta));
}

CurvatureSample Ambient::curvature_at(double s, double theta) const {
  check_domain(s, theta);
  CurvatureSample out;
  if (impl_->kind == Kind::WarpedModel) {
    const Profile::State st = impl_->profile->at(s);
    const double k = -st.upp / st.u;
    out.ric_nn = 2.0 * k;
    out.scal = warped_scalar_curvature(st.u, st.up, st.upp);
    out.mixed = {{{k, 0.0}, {0.0, k}}};
    out.ric_tangent_normal = {0.0, 0.0};
    return out;
  }
  const PointCurvature pc = point_curvature(s, theta);
  const double a = std::sqrt(pc.jet.g[1]), b = std::sqrt(pc.jet.g[2]);
  if (!(b > 0.0)) throw GeometryError("curvature_at: evaluation on the pole axis");
  const Vec3 n{1.0, 0.0, 0.0};
  const std::array<Vec3, 2> e{Vec3{0.0, 1.0 / a, 0.0}, Vec3{0.0, 0.0, 1.0 / b}};
  out.ric_nn = pc.ric(n, n);
  out.scal = pc.scalar;
  for (int i = 0; i < 2; ++i) {
    out.ric_tangent_normal[i] = pc.ric(e[i], n);
    for (int j = 0; j < 2; ++j) out.mixed[i][j] = pc.rm(e[i], n, n, e[j]);
  }
  return out;
}

double Ambient::boundary_second_form(double s, const Vec3& u, const Vec3& v) const {
  const PointCurvature pc = point_curvature(s, kHalfPi);
  const double a = std::sqrt(pc.jet.g[1]);
  // X = d_theta / A; d_i X^theta = -d_i A / A^2 = -d_i g_thth / (2 A^3).
  Vec3 nab{};
  for (int k = 0; k < 3; ++k) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      double term = pc.christoffel[k][i][1] / a;
      if (k == 1 && i < 2) term -= pc.jet.dg[i][1] / (2.0 * a * a * a);
      acc += u[i] * term;
    }
    nab[k] = acc;
  }
  return pc.dot(nab, v);
}

double Ambient::boundary_mean_curvature(double s) const {
  const double b = comp_b(s, kHalfPi);
  const Vec3 es{1.0, 0.0, 0.0}, ep{0.0, 0.0, 1.0 / b};
  return boundary_second_form(s, es, es) + boundary_second_form(s, ep, ep);
}

double inf_scalar_curvature(const Ambient& ambient, const Region& region) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < region.n_s; ++i) {
    const double s = region.n_s == 1 ? region.s_min
                                     : region.s_min + (region.s_max - region.s_min) * i / (region.n_s - 1);
    for (int j = 0; j < region.n_theta; ++j) {
      double t = region.n_theta == 1
                     ? region.theta_min
                     : region.theta_min + (region.theta_max - region.theta_min) * j / (region.n_theta - 1);
      // The coordinate axis is a removable singularity; sample just off it.
      t = std::max(t, 1e-3);
      best = std::min(best, ambient.curvature_at(s, t).scal);
    }
  }
  return best;
}

Ambient bump_ambient(const Profile& profile, const BumpSpec& bump, double fd_step) {
  auto p = std::make_shared<const Profile>(profile);
  const double scale = bump.scale;
  if (!(scale > 0.0)) throw DomainError("bump_ambient: scale must be positive");
  auto v = [p, scale](double s) { return scale * p->at(s / scale).u; };
  auto shape = [bump](double s) {
    const double x = (s - bump.center) / bump.width;
    return bump.amplitude * std::exp(-x * x);
  };
  auto a = [v](double s, double) { return v(s); };
  auto b = [v, shape](double s, double t) {
    const double sn = std::sin(t);
    return v(s) * sn * (1.0 + shape(s) * sn * sn);
  };
  // Leave room for the derivative stencils at the ends of the profile.
  const double reach = scale * profile.s_max() - 4.0 * fd_step;
  std::ostringstream label;
  label << "bump(amp=" << bump.amplitude << ",width=" << bump.width << ",scale=" << scale << ")";
  return Ambient::axisym(a, b, -reach, reach, fd_step, label.str());
}

// ---------------------------------------------------------------------------
// Sampled tables.

namespace {

// Catmull-Rom cubic through p1, p2 at fraction x with neighbours p0, p3.
double cubic(double p0, double p1, double p2, double p3, double x) {
  return p1 + 0.5 * x * (p2 - p0 + x * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + x * (3.0 * (p1 - p2) + p3 - p0)));
}

struct Table {
  std::vector<double> s, t;
  std::vector<double> a, b;  // row-major [is * nt + it]
  double ds = 0, dt = 0;

  // value with reflection in theta and clamped extrapolation in s
  double at(const std::vector<double>& f, long is, long it, bool odd_at_pole) const {
    const long ns = static_cast<long>(s.size()), nt = static_cast<long>(t.size());
    double sign = 1.0;
    if (it < 0) {
      it = -it;
      if (odd_at_pole) sign = -1.0;
    }
    if (it > nt - 1) it = 2 * (nt - 1) - it;
    if (is < 0) {
      // linear extrapolation
      return 2.0 * at(f, 0, it, false) * sign - at(f, -is, it, false) * sign;
    }
    if (is > ns - 1) {
      return 2.0 * at(f, ns - 1, it, false) * sign - at(f, 2 * (ns - 1) - is, it, false) * sign;
    }
    return sign * f[static_cast<std::size_t>(is * nt + it)];
  }

  double interp(const std::vector<double>& f, double sv, double tv, bool odd) const {
    const double xs = (sv - s.front()) / ds, xt = (tv - t.front()) / dt;
    const long is = static_cast<long>(std::floor(xs)), it = static_cast<long>(std::floor(xt));
    const double fs = xs - is, ft = xt - it;
    std::array<double, 4> rows{};
    for (int k = 0; k < 4; ++k) {
      const long r = is - 1 + k;
      rows[k] = cubic(at(f, r, it - 1, odd), at(f, r, it, odd), at(f, r, it + 1, odd), at(f, r, it + 2, odd), ft);
    }
    return cubic(rows[0], rows[1], rows[2], rows[3], fs);
  }
};

}  // namespace

Ambient Ambient::from_table(std::istream& csv, double fd_step) {
  std::string line;
  std::map<std::pair<double, double>, std::pair<double, double>> rows;
  std::vector<double> svals, tvals;
  while (std::getline(csv, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double s, t, a, b;
    if (!(ls >> s >> t >> a >> b)) continue;  // header
    rows[{s, t}] = {a, b};
    svals.push_back(s);
    tvals.push_back(t);
  }
  auto uniq = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }), v.end());
  };
  uniq(svals);
  uniq(tvals);
  if (svals.size() < 4 || tvals.size() < 4 || rows.size() != svals.size() * tvals.size()) {
    throw DomainError("ambient table: expected a complete rectangular grid of at least 4x4 samples");
  }
  if (std::abs(tvals.front()) > 1e-9 || std::abs(tvals.back() - kHalfPi) > 1e-9) {
    throw DomainError("ambient table: theta samples must span [0, pi/2]");
  }
  auto tab = std::make_shared<Table>();
  tab->s = svals;
  tab->t = tvals;
  tab->ds = (svals.back() - svals.front()) / static_cast<double>(svals.size() - 1);
  tab->dt = (tvals.back() - tvals.front()) / static_cast<double>(tvals.size() - 1);
  for (std::size_t i = 1; i < svals.size(); ++i)
    if (std::abs(svals[i] - svals[i - 1] - tab->ds) > 1e-9 * (1.0 + tab->ds))
      throw DomainError("ambient table: s samples must be uniform");
  for (std::size_t i = 1; i < tvals.size(); ++i)
    if (std::abs(tvals[i] - tvals[i - 1] - tab->dt) > 1e-9)
      throw DomainError("ambient table: theta samples must be uniform");
  const std::size_t nt = tvals.size();
  tab->a.assign(svals.size() * nt, std::nan(""));
  tab->b.assign(svals.size() * nt, std::nan(""));
  for (const auto& [key, value] : rows) {
    const auto is = static_cast<std::size_t>(std::llround((key.first - svals.front()) / tab->ds));
    const auto it = static_cast<std::size_t>(std::llround((key.second - tvals.front()) / tab->dt));
    tab->a[is * nt + it] = value.first;
    tab->b[is * nt + it] = value.second;
  }
  for (double v : tab->a)
    if (std::isnan(v)) throw DomainError("ambient table: missing sample");
  auto a = [tab](double s, double t) { return tab->interp(tab->a, s, t, false); };
  auto b = [tab](double s, double t) { return tab->interp(tab->b, s, t, true); };
  return axisym(a, b, svals.front(), svals.back(), fd_step > 0.0 ? fd_step : tab->ds, "table");
}

void write_ambient_table(const Ambient& ambient, double s_min, double s_max, int n_s, int n_theta,
                         std::ostream& out) {
  out << "s,theta,A,B\n" << std::setprecision(17);
  for (int i = 0; i < n_s; ++i) {
    const double s = s_min + (s_max - s_min) * i / (n_s - 1);
    for (int j = 0; j < n_theta; ++j) {
      const double t = kHalfPi * j / (n_theta - 1);
      out << s << ',' << t << ',' << ambient.comp_a(s, t) << ',' << ambient.comp_b(s, t) << '\n';
    }
  }
}

}  // namespace hawking
