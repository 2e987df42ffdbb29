#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "hawking/ambient.hpp"
#include "hawking/surface.hpp"

namespace hawking {

struct MassReport {
  double area = 0.0;
  double h2_integral = 0.0;
  int chi = 1;
  double lambda = 0.0;
  double m_tilde = 0.0;
  double m_hawking_double = 0.0;
};

/// sqrt(a / 8 pi) (chi - (1 / 8 pi) (int H^2 + (2/3) lambda a)).
double modified_hawking_mass(double area, double h2_integral, int chi, double lambda);

/// sqrt(a / 16 pi) (chi / 2 - (1 / 16 pi) (int H^2 + (2/3) lambda a)) for a
/// closed surface.
double hawking_mass(double area, double h2_integral, int chi, double lambda);

double modified_hawking_mass(const SurfaceGeometry& geometry, double lambda);
double hawking_mass_of_double(const SurfaceGeometry& geometry, double lambda);

MassReport mass_report(const SurfaceGeometry& geometry, double lambda);

/// m_tilde of the slices s in s_values of a warped model (lambda = 2).
std::vector<double> slice_mass_sweep(const Ambient& ambient, std::span<const double> s_values,
                                     const HemisphereGrid& grid);

/// Columns s, m_tilde.
void write_mass_sweep_csv(std::span<const double> s_values, std::span<const double> masses, std::ostream& out);

}  // namespace hawking
