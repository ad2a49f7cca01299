#include "vrdm/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "vrdm/constants.hpp"

namespace vrdm {

void Geometry::validate() const {
  for (const auto& a : atoms)
    if (a.charge <= 0.0)
      throw std::invalid_argument("geometry: nuclear charge must be positive");
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      if ((atoms[i].position - atoms[j].position).norm() <= 1e-10)
        throw std::invalid_argument("geometry: coincident atoms");
}

double Geometry::nuclear_repulsion() const {
  double e = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j)
      e += atoms[i].charge * atoms[j].charge /
           (atoms[i].position - atoms[j].position).norm();
  return e;
}

Geometry ring_geometry(int n, double radius_angstrom) {
  if (n < 2) throw std::invalid_argument("ring_geometry: need at least 2 atoms");
  if (radius_angstrom <= 0.0)
    throw std::invalid_argument("ring_geometry: radius must be positive");
  const double r = radius_angstrom * angstrom_to_bohr;
  Geometry g;
  g.atoms.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double phi = 2.0 * pi * k / n;
    g.atoms.push_back({1.0, {r * std::cos(phi), r * std::sin(phi), 0.0}});
  }
  g.validate();
  return g;
}

} // namespace vrdm
