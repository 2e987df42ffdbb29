#pragma once

#include <iosfwd>
#include <vector>

namespace hawking {

/// Normalization of the warped model. Only scalar curvature 2 is supported.
enum class Convention { R2 };

/// Minimal radius `a` and mass `m` of the half de Sitter-Schwarzschild profile,
/// tied by m = (a - a^3/3) / 2.
struct ProfileParams {
  double a = 1.0;
  double m = 1.0 / 3.0;
  Convention convention = Convention::R2;

  static ProfileParams from_a(double a);
  static ProfileParams from_m(double m);
};

/// m = (a - a^3/3) / 2. Throws DomainError unless 0 < a <= 1.
double mass_from_a(double a);

struct HorizonRoots {
  double r_minus = 0.0;
  double r_plus = 0.0;
  bool double_root = false;  // m = 1/3: r_minus = r_plus = 1
};

/// f_m(r) = 1 - r^2/3 - 2m/r.
double horizon_function(double m, double r);

/// Positive roots of f_m. Throws DomainError unless 0 < m <= 1/3.
HorizonRoots horizon_roots(double m);

/// Right-hand side of the profile ODE, u'' = (1 - u'^2)/(2u) - u/2.
double profile_rhs(double u, double up);

/// Scalar curvature of ds^2 + u(s)^2 g_{S^2} from u, u', u''.
double warped_scalar_curvature(double u, double up, double upp);

/// Radius profile u(s) on a symmetric arc-length grid [-s_max, s_max],
/// integrated with classical RK4 at fixed step from u(0)=a, u'(0)=0.
class Profile {
 public:
  struct State {
    double u = 0.0;
    double up = 0.0;
    double upp = 0.0;
    double uppp = 0.0;
  };

  static Profile integrate(const ProfileParams& params, double s_max = 3.0,
                           double step = 1e-3);

  const ProfileParams& params() const { return params_; }
  double step() const { return step_; }
  double s_max() const { return s_.back(); }
  const std::vector<double>& s_grid() const { return s_; }
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& up() const { return up_; }

  /// Profile jet at arbitrary s in range: one partial RK4 step from the
  /// nearest node; u'' and u''' from the ODE. Throws DomainError out of range.
  State at(double s) const;

  /// sup over nodes of |u(1-u'^2) - u^3/3 - 2m| / (2m).
  double first_integral_drift() const;

  /// Largest value of u on the grid range, refined to the critical point.
  double max_u() const;

 private:
  ProfileParams params_;
  double step_ = 0.0;
  std::vector<double> s_, u_, up_;
  std::size_t zero_index_ = 0;
};

/// R(s) with u'' taken from the ODE right-hand side. Throws DomainError if s
/// is outside the grid.
double scalar_curvature_of_profile(const Profile& profile, double s);

/// Columns s, u, up at 17 significant digits.
void write_profile_csv(const Profile& profile, std::ostream& out);

}  // namespace hawking
