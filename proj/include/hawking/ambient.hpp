#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include "hawking/profile.hpp"

namespace hawking {

using Vec3 = std::array<double, 3>;
using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// Diagonal metric diag(1, A^2, B^2) in coordinates (s, theta, phi) together
/// with its first and second coordinate derivatives. Components depend on
/// (s, theta) only.
struct MetricJet {
  Vec3 g{};                                 // g_kk
  std::array<Vec3, 3> dg{};                 // dg[c][k] = d_c g_kk
  std::array<std::array<Vec3, 3>, 3> ddg{}; // ddg[c][d][k] = d_c d_d g_kk
};

/// Levi-Civita connection and curvature of a MetricJet at one point.
/// riemann[a][b][c][d] = g(R(d_a, d_b) d_c, d_d) with
/// R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z, so that
/// sectional curvature is riemann(X,Y,Y,X) / |X ^ Y|^2.
struct PointCurvature {
  MetricJet jet;
  std::array<Mat3, 3> christoffel{};  // christoffel[k][i][j] = Gamma^k_ij
  std::array<std::array<Mat3, 3>, 3> riemann{};
  Mat3 ricci{};
  double scalar = 0.0;

  double rm(const Vec3& x, const Vec3& y, const Vec3& z, const Vec3& w) const;
  double ric(const Vec3& x, const Vec3& y) const;
  double dot(const Vec3& x, const Vec3& y) const;
};

PointCurvature curvature_from_jet(const MetricJet& jet);

/// Curvature along a slice through (s, theta) with normal d_s, in the
/// orthonormal tangent frame (d_theta / A, d_phi / B).
struct CurvatureSample {
  double ric_nn = 0.0;
  double scal = 0.0;
  Mat2 mixed{};                  // R(e_i, N, N, e_j)
  std::array<double, 2> ric_tangent_normal{};  // omega(e_i) = Ric(e_i, N)
};

/// Bounded sampling box in (s, theta) used to approximate inf R.
struct Region {
  double s_min = -1.0;
  double s_max = 1.0;
  double theta_min = 0.0;
  double theta_max = 1.5707963267948966;
  int n_s = 81;
  int n_theta = 41;
};

/// Ambient 3-metric ds^2 + A(s,theta)^2 dtheta^2 + B(s,theta)^2 dphi^2 on the
/// half space theta in [0, pi/2]. Immutable; copies share state.
class Ambient {
 public:
  enum class Kind { WarpedModel, AxisymPerturbed };
  using Component = std::function<double(double s, double theta)>;

  /// A = u(s), B = u(s) sin(theta) with analytic derivatives from the profile.
  static Ambient warped(Profile profile);

  /// User components. A must be even and B odd in theta about 0, both even
  /// about pi/2 with vanishing theta-derivative there (checked on a sample).
  /// Derivatives by 4th-order centered differences of step fd_step.
  static Ambient axisym(Component a, Component b, double s_min, double s_max,
                        double fd_step = 2e-3, std::string label = "axisym");

  /// Sampled table (columns s, theta, A, B on a rectangular grid), bicubic.
  /// fd_step <= 0 uses the s-spacing, so difference stencils land on knots
  /// of the piecewise-cubic interpolant and keep their fourth order.
  static Ambient from_table(std::istream& csv, double fd_step = 0.0);

  Kind kind() const;
  const std::string& label() const;
  const Profile* profile() const;  // non-null for WarpedModel
  double s_min() const;
  double s_max() const;
  double fd_step() const;

  /// Raw components A, B at a point of the closed domain.
  double comp_a(double s, double theta) const;
  double comp_b(double s, double theta) const;

  /// (g_ss, g_thth, g_phph). Throws DomainError outside the domain.
  Vec3 metric_at(double s, double theta, double phi = 0.0) const;

  MetricJet jet(double s, double theta) const;
  PointCurvature point_curvature(double s, double theta) const;

  /// Warped model: closed forms. Perturbed: finite-difference curvature chain.
  CurvatureSample curvature_at(double s, double theta) const;

  /// g(nabla_U X, V) for the outward unit normal X = d_theta / A of the
  /// boundary theta = pi/2, evaluated at (s, pi/2).
  double boundary_second_form(double s, const Vec3& u, const Vec3& v) const;

  /// Mean curvature of the boundary cylinder {theta = pi/2} at s
  /// (trace of boundary_second_form over its tangent plane).
  double boundary_mean_curvature(double s) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  void check_domain(double s, double theta) const;
};

/// Grid minimum of R over the region.
double inf_scalar_curvature(const Ambient& ambient, const Region& region);

/// Reflection-symmetric bump deformation of a (possibly rescaled) model:
/// A = v(s), B = v(s) sin(theta) (1 + amplitude exp(-((s-center)/width)^2) sin^2 theta),
/// with v(s) = scale * u(s / scale). scale < 1 raises the scalar curvature to 2/scale^2.
struct BumpSpec {
  double amplitude = 0.0;
  double width = 0.5;
  double center = 0.0;
  double scale = 1.0;
};
Ambient bump_ambient(const Profile& profile, const BumpSpec& bump, double fd_step = 2e-3);

/// Writes a sampled table of an ambient in the from_table format.
void write_ambient_table(const Ambient& ambient, double s_min, double s_max, int n_s,
                         int n_theta, std::ostream& out);

}  // namespace hawking
