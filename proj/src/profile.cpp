#include "hawking/profile.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "hawking/errors.hpp"

namespace hawking {

namespace {

constexpr double kMassMax = 1.0 / 3.0;
// mass_from_a(1) rounds to 1/3 + 1 ulp.
constexpr double kMassTol = 1e-15;

struct Deriv {
  double du, dup;
};

Deriv ode(double u, double up) { return {up, profile_rhs(u, up)}; }

void rk4_step(double& u, double& up, double h) {
  const Deriv k1 = ode(u, up);
  const Deriv k2 = ode(u + 0.5 * h * k1.du, up + 0.5 * h * k1.dup);
  const Deriv k3 = ode(u + 0.5 * h * k2.du, up + 0.5 * h * k2.dup);
  const Deriv k4 = ode(u + h * k3.du, up + h * k3.dup);
  u += h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
  up += h / 6.0 * (k1.dup + 2.0 * k2.dup + 2.0 * k3.dup + k4.dup);
}

double bisect(double m, double lo, double hi) {
  double flo = horizon_function(m, lo);
  for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = horizon_function(m, mid);
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double mass_from_a(double a) {
  if (!(a > 0.0) || a > 1.0) {
    throw DomainError("mass_from_a: minimal radius must lie in (0, 1], got " +
                      std::to_string(a));
  }
  return 0.5 * (a - a * a * a / 3.0);
}

ProfileParams ProfileParams::from_a(double a) { return {a, mass_from_a(a), Convention::R2}; }

ProfileParams ProfileParams::from_m(double m) {
  const HorizonRoots roots = horizon_roots(m);
  return {roots.r_minus, m, Convention::R2};
}

double horizon_function(double m, double r) { return 1.0 - r * r / 3.0 - 2.0 * m / r; }

HorizonRoots horizon_roots(double m) {
  if (!(m > 0.0) || m > kMassMax + kMassTol) {
    throw DomainError("horizon_roots: mass must lie in (0, 1/3], got " + std::to_string(m));
  }
  if (m >= kMassMax - kMassTol) return {1.0, 1.0, true};
  // f_m is concave on r > 0 with its maximum at r^3 = 3m.
  const double r_star = std::cbrt(3.0 * m);
  HorizonRoots roots;
  roots.r_minus = bisect(m, 0.0 + 1e-300, r_star);
  roots.r_plus = bisect(m, r_star, std::sqrt(3.0));
  return roots;
}

double profile_rhs(double u, double up) { return 0.5 * (1.0 - up * up) / u - 0.5 * u; }

double warped_scalar_curvature(double u, double up, double upp) {
  return 2.0 * (1.0 - up * up) / (u * u) - 4.0 * upp / u;
}

Profile Profile::integrate(const ProfileParams& params, double s_max, double step) {
  if (!(params.a > 0.0) || params.a > 1.0) throw DomainError("integrate_profile: invalid a");
  if (std::abs(mass_from_a(params.a) - params.m) > 1e-14) {
    throw DomainError("integrate_profile: a and m are inconsistent");
  }
  if (!(step > 0.0) || !(s_max > 0.0)) throw DomainError("integrate_profile: step and s_max must be positive");

  const auto n_half = static_cast<std::size_t>(std::ceil(s_max / step - 1e-9));
  const double h = s_max / static_cast<double>(n_half);

  Profile p;
  p.params_ = params;
  p.step_ = h;
  p.zero_index_ = n_half;
  const std::size_t n = 2 * n_half + 1;
  p.s_.resize(n);
  p.u_.resize(n);
  p.up_.resize(n);
  p.s_[n_half] = 0.0;
  p.u_[n_half] = params.a;
  p.up_[n_half] = 0.0;

  for (int dir : {+1, -1}) {
    double u = params.a, up = 0.0;
    for (std::size_t k = 1; k <= n_half; ++k) {
      rk4_step(u, up, dir * h);
      if (!(u > 0.0)) throw IntegrationError("integrate_profile: radius reached zero");
      const std::size_t idx = dir > 0 ? n_half + k : n_half - k;
      p.s_[idx] = dir * static_cast<double>(k) * h;
      p.u_[idx] = u;
      p.up_[idx] = up;
    }
  }
  return p;
}

Profile::State Profile::at(double s) const {
  const double tol = 1e-12 * std::max(1.0, s_max());
  if (s < s_.front() - tol || s > s_.back() + tol) {
    throw DomainError("Profile::at: s = " + std::to_string(s) + " outside profile range");
  }
  const double pos = (s - s_.front()) / step_;
  auto k = static_cast<std::size_t>(std::clamp(std::llround(pos), 0LL,
                                               static_cast<long long>(s_.size() - 1)));
  double u = u_[k], up = up_[k];
  const double ds = s - s_[k];
  if (ds != 0.0) rk4_step(u, up, ds);
  const double m = params_.m;
  State st;
  st.u = u;
  st.up = up;
  st.upp = profile_rhs(u, up);
  // d/ds of u'' = -u/3 + m/u^2, which equals the ODE right-hand side on solutions.
  st.uppp = -up / 3.0 - 2.0 * m * up / (u * u * u);
  return st;
}

double Profile::first_integral_drift() const {
  const double m = params_.m;
  double worst = 0.0;
  for (std::size_t i = 0; i < s_.size(); ++i) {
    const double u = u_[i], up = up_[i];
    const double c = u * (1.0 - up * up) - u * u * u / 3.0;
    worst = std::max(worst, std::abs(c - 2.0 * m) / (2.0 * m));
  }
  return worst;
}

double Profile::max_u() const {
  auto it = std::max_element(u_.begin(), u_.end());
  double best = *it;
  auto k = static_cast<std::size_t>(it - u_.begin());
  if (k == 0 || k + 1 == u_.size()) return best;
  // Newton on u'(s) = 0 starting at the best node.
  double s = s_[k];
  for (int iter = 0; iter < 20; ++iter) {
    const State st = at(s);
    if (st.upp == 0.0) break;
    const double ds = -st.up / st.upp;
    s = std::clamp(s + ds, s_.front(), s_.back());
    if (std::abs(ds) < 1e-15) break;
  }
  return std::max(best, at(s).u);
}

double scalar_curvature_of_profile(const Profile& profile, double s) {
  const Profile::State st = profile.at(s);
  return warped_scalar_curvature(st.u, st.up, st.upp);
}

void write_profile_csv(const Profile& profile, std::ostream& out) {
  out << "s,u,up\n" << std::setprecision(17);
  for (std::size_t i = 0; i < profile.s_grid().size(); ++i) {
    out << profile.s_grid()[i] << ',' << profile.u()[i] << ',' << profile.up()[i] << '\n';
  }
}

}  // namespace hawking
