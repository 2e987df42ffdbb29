#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hawking {

/// Staggered latitude-longitude grid on the closed upper hemisphere.
///
/// theta_i = (i + 1/2) h for i = 0..n_theta-1 with h = pi / (2 n_theta - 1),
/// so the last ring sits on the equator and no node sits on the pole.
/// phi_j = 2 pi j / n_phi. n_phi = 1 is the axisymmetric grid.
///
/// Scalar fields use ghost values by reflection: through the pole,
/// f(-theta, phi) = f(theta, phi + pi); across the equator,
/// f(pi/2 + x, phi) = f(pi/2 - x, phi).
class HemisphereGrid {
 public:
  explicit HemisphereGrid(int n_theta, int n_phi = 1);

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  bool axisym() const { return n_phi_ == 1; }
  std::size_t size() const { return static_cast<std::size_t>(n_theta_) * n_phi_; }
  double h() const { return h_; }
  double h_phi() const { return h_phi_; }
  double theta(int i) const { return (i + 0.5) * h_; }
  double phi(int j) const { return j * h_phi_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_phi_ + j; }
  int equator() const { return n_theta_ - 1; }

  /// Weights exact for sin((2k+1) theta), k < n_theta, on [0, pi/2]:
  /// spectrally accurate for integrands odd about the pole and even about the
  /// equator (area densities of reflection-symmetric data).
  const std::vector<double>& theta_weights() const { return weights_; }

  /// sum_ij w_i h_phi f_ij; f must already contain the area density.
  double integrate(std::span<const double> f) const;

  /// sum_j h_phi f(equator, j); f must contain the line density.
  double boundary_integrate(std::span<const double> f) const;

 private:
  int n_theta_;
  int n_phi_;
  double h_;
  double h_phi_;
  std::vector<double> weights_;
};

/// Centered second-order partial derivatives of a node field.
struct FieldDerivatives {
  std::vector<double> t, p, tt, tp, pp;
};

/// Reflection sign of a field's ghost values: -1 for components carrying an
/// odd number of theta indices (d_theta flips under both reflections).
struct Parity {
  double pole = 1.0;
  double equator = 1.0;
};

/// With one_sided_equator = false the equator ghost is the reflection (for a
/// scalar: discrete d_theta f = 0). Otherwise one-sided stencils are used on
/// the equator ring (diagnostic mode for inadmissible graphs).
FieldDerivatives field_derivatives(const HemisphereGrid& grid, std::span<const double> f,
                                   Parity parity = {}, bool one_sided_equator = false);

/// Fourth-order one-sided theta-derivative on the equator ring (per phi node).
std::vector<double> equator_theta_derivative(const HemisphereGrid& grid, std::span<const double> f);

/// Six-point Lagrange interpolation of an axisymmetric node field at theta in
/// [0, pi/2], using the reflection ghosts at the pole and the equator.
double interpolate_theta(const HemisphereGrid& grid, std::span<const double> f, double theta);

}  // namespace hawking
