#include "hawking/grid.hpp"

#include <cmath>
#include <numbers>

#include "hawking/errors.hpp"

namespace hawking {

HemisphereGrid::HemisphereGrid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 5) throw DomainError("HemisphereGrid: n_theta must be at least 5");
  if (n_phi < 1 || (n_phi > 1 && (n_phi % 2 != 0 || n_phi < 4))) {
    throw DomainError("HemisphereGrid: n_phi must be 1 or an even number >= 4");
  }
  h_ = std::numbers::pi / (2.0 * n_theta - 1.0);
  h_phi_ = 2.0 * std::numbers::pi / n_phi;

  // Discrete orthogonality of sin((2k+1) theta_i) on the staggered nodes with
  // half weight on the equator node and on the last harmonic.
  const int m = n_theta;
  weights_.assign(m, 0.0);
  const double scale = 4.0 / (2.0 * m - 1.0);
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
      const double c = (k == m - 1) ? 0.5 : 1.0;
      acc += c * std::sin((2.0 * k + 1.0) * theta(i)) / (2.0 * k + 1.0);
    }
    weights_[i] = (i == m - 1 ? 0.5 : 1.0) * scale * acc;
  }
}

double HemisphereGrid::integrate(std::span<const double> f) const {
  double acc = 0.0;
  for (int i = 0; i < n_theta_; ++i) {
    double ring = 0.0;
    for (int j = 0; j < n_phi_; ++j) ring += f[index(i, j)];
    acc += weights_[i] * ring;
  }
  return acc * h_phi_;
}

double HemisphereGrid::boundary_integrate(std::span<const double> f) const {
  double acc = 0.0;
  for (int j = 0; j < n_phi_; ++j) acc += f[index(equator(), j)];
  return acc * h_phi_;
}

FieldDerivatives field_derivatives(const HemisphereGrid& grid, std::span<const double> f,
                                   Parity parity, bool one_sided_equator) {
  const bool neumann = !one_sided_equator;
  const int nt = grid.n_theta(), np = grid.n_phi();
  const double h = grid.h(), hp = grid.h_phi();
  FieldDerivatives d;
  const std::size_t n = grid.size();
  d.t.assign(n, 0.0);
  d.p.assign(n, 0.0);
  d.tt.assign(n, 0.0);
  d.tp.assign(n, 0.0);
  d.pp.assign(n, 0.0);

  auto wrap = [np](int j) { return ((j % np) + np) % np; };
  // Value at ring i (possibly a ghost ring) and longitude j.
  auto val = [&](int i, int j) -> double {
    if (i < 0) return parity.pole * f[grid.index(-i - 1, wrap(j + np / 2))];
    if (i > nt - 1) return parity.equator * f[grid.index(2 * (nt - 1) - i, wrap(j))];
    return f[grid.index(i, wrap(j))];
  };

  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < np; ++j) {
      const std::size_t k = grid.index(i, j);
      const double c = val(i, j);
      if (i == nt - 1 && !neumann) {
        d.t[k] = (3.0 * c - 4.0 * val(i - 1, j) + val(i - 2, j)) / (2.0 * h);
        d.tt[k] = (2.0 * c - 5.0 * val(i - 1, j) + 4.0 * val(i - 2, j) - val(i - 3, j)) / (h * h);
      } else {
        d.t[k] = (val(i + 1, j) - val(i - 1, j)) / (2.0 * h);
        d.tt[k] = (val(i + 1, j) - 2.0 * c + val(i - 1, j)) / (h * h);
      }
      if (np > 1) {
        d.p[k] = (val(i, j + 1) - val(i, j - 1)) / (2.0 * hp);
        d.pp[k] = (val(i, j + 1) - 2.0 * c + val(i, j - 1)) / (hp * hp);
        if (i == nt - 1 && !neumann) {
          auto dp = [&](int r) { return (val(r, j + 1) - val(r, j - 1)) / (2.0 * hp); };
          d.tp[k] = (3.0 * dp(i) - 4.0 * dp(i - 1) + dp(i - 2)) / (2.0 * h);
        } else {
          d.tp[k] = (val(i + 1, j + 1) - val(i + 1, j - 1) - val(i - 1, j + 1) + val(i - 1, j - 1)) /
                    (4.0 * h * hp);
        }
      }
    }
  }
  return d;
}

std::vector<double> equator_theta_derivative(const HemisphereGrid& grid, std::span<const double> f) {
  const int e = grid.equator();
  std::vector<double> out(grid.n_phi());
  for (int j = 0; j < grid.n_phi(); ++j) {
    auto v = [&](int r) { return f[grid.index(e - r, j)]; };
    out[j] = (25.0 * v(0) - 48.0 * v(1) + 36.0 * v(2) - 16.0 * v(3) + 3.0 * v(4)) / (12.0 * grid.h());
  }
  return out;
}

}  // namespace hawking

namespace hawking {

double interpolate_theta(const HemisphereGrid& grid, std::span<const double> f, double theta) {
  const int n = grid.n_theta();
  // Node i sits at (i + 1/2) h; ghosts: f(-1-i) = f(i) at the pole and
  // f(n-1+k) = f(n-1-k) across the equator.
  auto value = [&](int i) {
    if (i < 0) i = -1 - i;
    if (i > n - 1) i = 2 * (n - 1) - i;
    return f[static_cast<std::size_t>(grid.index(i, 0))];
  };
  const double x = theta / grid.h() - 0.5;
  const int base = static_cast<int>(std::floor(x)) - 2;
  double acc = 0.0;
  for (int i = base; i < base + 6; ++i) {
    double l = 1.0;
    for (int k = base; k < base + 6; ++k)
      if (k != i) l *= (x - k) / static_cast<double>(i - k);
    acc += l * value(i);
  }
  return acc;
}

}  // namespace hawking
