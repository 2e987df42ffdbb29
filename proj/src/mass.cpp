#include "hawking/mass.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "hawking/errors.hpp"

namespace hawking {

namespace {
constexpr double kPi = std::numbers::pi;
}

double modified_hawking_mass(double area, double h2_integral, int chi, double lambda) {
  if (area <= 0.0) return 0.0;
  const double total = h2_integral + (2.0 / 3.0) * lambda * area;
  return std::sqrt(area / (8.0 * kPi)) * (chi - total / (8.0 * kPi));
}

double hawking_mass(double area, double h2_integral, int chi, double lambda) {
  if (area <= 0.0) return 0.0;
  const double total = h2_integral + (2.0 / 3.0) * lambda * area;
  return std::sqrt(area / (16.0 * kPi)) * (0.5 * chi - total / (16.0 * kPi));
}

double modified_hawking_mass(const SurfaceGeometry& geometry, double lambda) {
  return modified_hawking_mass(geometry.area, geometry.h2_integral, 1, lambda);
}

double hawking_mass_of_double(const SurfaceGeometry& geometry, double lambda) {
  return hawking_mass(2.0 * geometry.area, 2.0 * geometry.h2_integral, 2, lambda);
}

MassReport mass_report(const SurfaceGeometry& geometry, double lambda) {
  MassReport r;
  r.area = geometry.area;
  r.h2_integral = geometry.h2_integral;
  r.chi = 1;
  r.lambda = lambda;
  r.m_tilde = modified_hawking_mass(geometry, lambda);
  r.m_hawking_double = hawking_mass_of_double(geometry, lambda);
  return r;
}

std::vector<double> slice_mass_sweep(const Ambient& ambient, std::span<const double> s_values,
                                     const HemisphereGrid& grid) {
  if (ambient.kind() != Ambient::Kind::WarpedModel) {
    throw PreconditionError("slice_mass_sweep: requires a warped model ambient");
  }
  std::vector<double> out;
  out.reserve(s_values.size());
  for (double s : s_values) {
    const SurfaceGeometry geo = compute_geometry(slice_surface(ambient, s, grid));
    out.push_back(modified_hawking_mass(geo, 2.0));
  }
  return out;
}

void write_mass_sweep_csv(std::span<const double> s_values, std::span<const double> masses, std::ostream& out) {
  out << "s,m_tilde\n" << std::setprecision(17);
  for (std::size_t k = 0; k < s_values.size(); ++k) out << s_values[k] << ',' << masses[k] << '\n';
}

}  // namespace hawking
